/** Match-3 board: drag a path over three or more adjacent identical tiles.
 * Path building is validated locally (adjacency, same kind, no repeats);
 * an invalid drag is rejected visually and never reaches the server. Only
 * a finished path of length >= 3 posts a chain event. */

import type { MiniGameDescriptor } from './api.js';

export type ChainEmitter = (path: number[][]) => void;

interface DragState {
  path: [number, number][];
  kind: number | null;
}

function isAdjacent(a: [number, number], b: [number, number]): boolean {
  return Math.abs(a[0] - b[0]) + Math.abs(a[1] - b[1]) === 1;
}

function inPath(drag: DragState, cell: [number, number]): boolean {
  return drag.path.some(([r, c]) => r === cell[0] && c === cell[1]);
}

export function renderMatch3(
  container: HTMLElement,
  game: MiniGameDescriptor,
  emitChain: ChainEmitter,
): void {
  container.innerHTML = '';
  const cells = game.cells ?? [];
  const drag: DragState = { path: [], kind: null };

  const board = document.createElement('div');
  board.className = 'match3-board';
  board.dataset.testid = 'match3-board';

  const status = document.createElement('p');
  status.dataset.testid = 'match3-status';
  status.textContent = `Tiles cleared: ${game.score ?? 0} of ${game.target_tiles ?? 10}.`;

  const clearSelection = () => {
    drag.path = [];
    drag.kind = null;
    board
      .querySelectorAll('.tile.selected')
      .forEach((tile) => tile.classList.remove('selected'));
  };

  const rejectVisually = (tile: HTMLElement) => {
    tile.classList.add('rejected');
    setTimeout(() => tile.classList.remove('rejected'), 150);
    clearSelection();
  };

  cells.forEach((row, r) => {
    const rowElement = document.createElement('div');
    rowElement.className = 'tile-row';
    row.forEach((kind, c) => {
      const tile = document.createElement('button');
      tile.className = `tile kind-${kind}`;
      tile.dataset.testid = `tile-${r}-${c}`;
      tile.dataset.kind = String(kind);

      tile.addEventListener('pointerdown', (event) => {
        event.preventDefault();
        clearSelection();
        drag.path = [[r, c]];
        drag.kind = kind;
        tile.classList.add('selected');
      });

      tile.addEventListener('pointerenter', () => {
        if (drag.path.length === 0) return;
        const cell: [number, number] = [r, c];
        const last = drag.path[drag.path.length - 1]!;
        if (kind !== drag.kind || !isAdjacent(last, cell) || inPath(drag, cell)) {
          rejectVisually(tile);
          return;
        }
        drag.path.push(cell);
        tile.classList.add('selected');
      });

      tile.addEventListener('pointerup', () => {
        if (drag.path.length >= 3) {
          emitChain(drag.path.map(([pr, pc]) => [pr, pc]));
        }
        clearSelection();
      });

      rowElement.appendChild(tile);
    });
    board.appendChild(rowElement);
  });

  container.appendChild(board);
  container.appendChild(status);
}
