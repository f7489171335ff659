import type { ColorName, GameMove } from './types.js';

// Vertex letters skip I, matching the engine wire format.
const LETTERS = 'ABCDEFGHJKLMNOPQRSTUVWXYZ';

export interface Stone {
  col: number; // 1-based from the left
  row: number; // 1-based from the top
  color: ColorName;
}

export function vertexToPoint(
  vertex: string,
  boardSize: number,
): { col: number; row: number } | null {
  const v = vertex.trim().toUpperCase();
  if (v === 'PASS') return null;
  const col = LETTERS.indexOf(v[0]) + 1;
  const displayRow = parseInt(v.slice(1), 10);
  if (col === 0 || Number.isNaN(displayRow)) {
    throw new Error(`bad vertex ${vertex}`);
  }
  const row = boardSize + 1 - displayRow;
  if (col < 1 || col > boardSize || row < 1 || row > boardSize) {
    throw new Error(`vertex ${vertex} outside board`);
  }
  return { col, row };
}

/**
 * Occupancy after playing a move prefix, captures included (a stone group
 * with no liberties is lifted; suicide resolves by removing the mover's
 * group, deeper legality being the engine's business).
 */
export class Board {
  readonly size: number;
  private grid: Map<string, ColorName> = new Map();

  constructor(size: number) {
    this.size = size;
  }

  private key(col: number, row: number): string {
    return `${col},${row}`;
  }

  stoneAt(col: number, row: number): ColorName | undefined {
    return this.grid.get(this.key(col, row));
  }

  stones(): Stone[] {
    const out: Stone[] = [];
    for (const [key, color] of this.grid) {
      const [col, row] = key.split(',').map(Number);
      out.push({ col, row, color });
    }
    return out.sort((a, b) => a.row - b.row || a.col - b.col);
  }

  private neighbors(col: number, row: number): [number, number][] {
    const out: [number, number][] = [];
    if (col > 1) out.push([col - 1, row]);
    if (col < this.size) out.push([col + 1, row]);
    if (row > 1) out.push([col, row - 1]);
    if (row < this.size) out.push([col, row + 1]);
    return out;
  }

  private groupHasLiberty(col: number, row: number): [boolean, string[]] {
    const color = this.stoneAt(col, row);
    const seen = new Set<string>([this.key(col, row)]);
    const frontier: [number, number][] = [[col, row]];
    while (frontier.length > 0) {
      const [c, r] = frontier.pop()!;
      for (const [nc, nr] of this.neighbors(c, r)) {
        const occupant = this.stoneAt(nc, nr);
        if (occupant === undefined) return [true, [...seen]];
        if (occupant === color && !seen.has(this.key(nc, nr))) {
          seen.add(this.key(nc, nr));
          frontier.push([nc, nr]);
        }
      }
    }
    return [false, [...seen]];
  }

  place(col: number, row: number, color: ColorName): void {
    const key = this.key(col, row);
    if (this.grid.has(key)) {
      throw new Error(`point ${key} already occupied`);
    }
    this.grid.set(key, color);
    const enemy: ColorName = color === 'black' ? 'white' : 'black';
    for (const [nc, nr] of this.neighbors(col, row)) {
      if (this.stoneAt(nc, nr) === enemy) {
        const [alive, group] = this.groupHasLiberty(nc, nr);
        if (!alive) group.forEach((k) => this.grid.delete(k));
      }
    }
    if (this.grid.has(key)) {
      const [alive, group] = this.groupHasLiberty(col, row);
      if (!alive) group.forEach((k) => this.grid.delete(k));
    }
  }
}

/** Board occupancy after the first `prefixLength` moves. */
export function boardAfter(
  moves: GameMove[],
  prefixLength: number,
  boardSize: number,
  handicapStones: number[][] = [],
): Board {
  const board = new Board(boardSize);
  for (const [col, row] of handicapStones) {
    board.place(col, row, 'black');
  }
  for (const move of moves.slice(0, prefixLength)) {
    const point = vertexToPoint(move.vertex, boardSize);
    if (point !== null) board.place(point.col, point.row, move.color);
  }
  return board;
}

export function wireMoves(pairs: [string, string][] | string[][]): GameMove[] {
  return pairs.map(([color, vertex]) => ({
    color: color.toLowerCase().startsWith('b') ? 'black' : 'white',
    vertex,
  }));
}
