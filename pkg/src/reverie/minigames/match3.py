"""Chain-drag match-3 board.

The player drags a path across three or more orthogonally adjacent tiles
of the same kind to eliminate them; columns collapse downward and refill
from the top using the board's seeded generator, so identical seeds and
move sequences always reproduce identical boards and scores.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

DEFAULT_WIDTH = 8
DEFAULT_HEIGHT = 8
DEFAULT_KINDS = 6
MIN_CHAIN = 3
RESHUFFLE_ATTEMPTS = 100

POINTS_PER_TILE = 0.5
PERFORMANCE_CAP = 5.0
TARGET_TILES = 10


class BadDimensions(ValueError):
    pass


@dataclass
class Match3Board:
    width: int
    height: int
    kinds: int
    cells: list  # rows of tile kinds, cells[row][col]
    rng: random.Random
    seed: int
    score: int = 0
    reshuffles: int = 0

    def kind_at(self, row: int, col: int) -> int:
        return self.cells[row][col]

    def in_bounds(self, row: int, col: int) -> bool:
        return 0 <= row < self.height and 0 <= col < self.width

    def to_dict(self) -> dict:
        return {
            "width": self.width,
            "height": self.height,
            "kinds": self.kinds,
            "seed": self.seed,
            "score": self.score,
            "cells": [list(row) for row in self.cells],
        }


def match3_generate(
    seed: int,
    width: int = DEFAULT_WIDTH,
    height: int = DEFAULT_HEIGHT,
    kinds: int = DEFAULT_KINDS,
) -> Match3Board:
    """Deterministically fill a board that has at least one playable chain."""
    if width < 1 or height < 1 or width * height < 9:
        raise BadDimensions(f"board {width}x{height} is too small")
    if kinds < 3:
        raise BadDimensions(f"need at least 3 tile kinds, got {kinds}")
    rng = random.Random(seed)
    cells = [[rng.randrange(kinds) for _ in range(width)] for _ in range(height)]
    board = Match3Board(
        width=width, height=height, kinds=kinds, cells=cells, rng=rng, seed=seed
    )
    if not match3_has_moves(board):
        _reshuffle(board)
    return board


def _reshuffle(board: Match3Board) -> None:
    # Permute the existing tiles until a chain exists; regenerate outright
    # if permutations keep failing (possible when kinds are very spread).
    flat = [kind for row in board.cells for kind in row]
    for _ in range(RESHUFFLE_ATTEMPTS):
        board.rng.shuffle(flat)
        it = iter(flat)
        board.cells = [
            [next(it) for _ in range(board.width)] for _ in range(board.height)
        ]
        board.reshuffles += 1
        if match3_has_moves(board):
            return
    while True:
        board.cells = [
            [board.rng.randrange(board.kinds) for _ in range(board.width)]
            for _ in range(board.height)
        ]
        board.reshuffles += 1
        if match3_has_moves(board):
            return


_NEIGHBOR_OFFSETS = ((-1, 0), (1, 0), (0, -1), (0, 1))


def match3_has_moves(board: Match3Board) -> bool:
    """True iff some chain of three or more same-kind adjacent tiles exists.

    A path of length three has a middle tile with two distinct same-kind
    orthogonal neighbors, and any such tile yields a valid chain, so the
    check reduces to scanning for that middle tile.
    """
    for row in range(board.height):
        for col in range(board.width):
            kind = board.cells[row][col]
            same = 0
            for dr, dc in _NEIGHBOR_OFFSETS:
                r, c = row + dr, col + dc
                if board.in_bounds(r, c) and board.cells[r][c] == kind:
                    same += 1
                    if same >= 2:
                        return True
    return False


def chain_is_valid(board: Match3Board, path) -> bool:
    if len(path) < MIN_CHAIN:
        return False
    seen = set()
    previous = None
    kind = None
    for cell in path:
        row, col = cell
        if not board.in_bounds(row, col):
            return False
        if (row, col) in seen:
            return False
        seen.add((row, col))
        if kind is None:
            kind = board.cells[row][col]
        elif board.cells[row][col] != kind:
            return False
        if previous is not None:
            if abs(row - previous[0]) + abs(col - previous[1]) != 1:
                return False
        previous = (row, col)
    return True


def match3_apply_chain(board: Match3Board, path) -> int:
    """Eliminate a dragged chain; returns the number of tiles removed.

    Invalid chains are rejected (returns 0, board untouched), never raised:
    a bad drag is normal play. After a valid elimination the columns
    collapse, refill from the top, and the board reshuffles if it settled
    into a dead position.
    """
    if not chain_is_valid(board, path):
        return 0
    for row, col in path:
        board.cells[row][col] = None
    for col in range(board.width):
        remaining = [
            board.cells[row][col]
            for row in range(board.height)
            if board.cells[row][col] is not None
        ]
        fresh = [
            board.rng.randrange(board.kinds)
            for _ in range(board.height - len(remaining))
        ]
        column = fresh + remaining
        for row in range(board.height):
            board.cells[row][col] = column[row]
    eliminated = len(path)
    board.score += eliminated
    if not match3_has_moves(board):
        _reshuffle(board)
    return eliminated


def match3_find_chain(board: Match3Board):
    """First playable 3-chain in scan order, or None. Deterministic."""
    for row in range(board.height):
        for col in range(board.width):
            kind = board.cells[row][col]
            same = [
                (row + dr, col + dc)
                for dr, dc in _NEIGHBOR_OFFSETS
                if board.in_bounds(row + dr, col + dc)
                and board.cells[row + dr][col + dc] == kind
            ]
            if len(same) >= 2:
                return [same[0], (row, col), same[1]]
    return None


def match3_completed(board: Match3Board) -> bool:
    return board.score >= TARGET_TILES


def match3_performance(board: Match3Board) -> float:
    if not match3_completed(board):
        return 0.0
    return min(POINTS_PER_TILE * board.score, PERFORMANCE_CAP)
