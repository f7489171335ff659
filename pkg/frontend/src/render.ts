import type { ViewState } from './state.js';
import type { PointRow, SegmentDoc } from './types.js';
import type { Board } from './board.js';

// Renderers build plain SVG/HTML strings: trivially testable, and the
// browser shell only ever assigns them to innerHTML.

const CELL = 26;
const MARGIN = 30;

export function renderBoardSvg(board: Board): string {
  const size = board.size;
  const px = MARGIN * 2 + CELL * (size - 1);
  const parts: string[] = [
    `<svg class="board" viewBox="0 0 ${px} ${px}" xmlns="http://www.w3.org/2000/svg">`,
    `<rect width="${px}" height="${px}" fill="#deb26b"/>`,
  ];
  for (let i = 0; i < size; i++) {
    const at = MARGIN + CELL * i;
    const end = MARGIN + CELL * (size - 1);
    parts.push(
      `<line x1="${MARGIN}" y1="${at}" x2="${end}" y2="${at}" stroke="#3b2a12" stroke-width="1"/>`,
      `<line x1="${at}" y1="${MARGIN}" x2="${at}" y2="${end}" stroke="#3b2a12" stroke-width="1"/>`,
    );
  }
  for (const stone of board.stones()) {
    const cx = MARGIN + CELL * (stone.col - 1);
    const cy = MARGIN + CELL * (stone.row - 1);
    const fill = stone.color === 'black' ? '#111' : '#fafafa';
    parts.push(
      `<circle class="stone stone-${stone.color}" cx="${cx}" cy="${cy}" ` +
        `r="${CELL * 0.47}" fill="${fill}" stroke="#222" stroke-width="1"/>`,
    );
  }
  parts.push('</svg>');
  return parts.join('');
}

export interface GraphGeometry {
  width: number;
  height: number;
}

/** Cost-of-passing bars with the fitted descent and a position cursor.
 * One mark per analyzed point. */
export function renderGraphSvg(
  points: PointRow[],
  baseline: { slope: number; intercept: number },
  segments: SegmentDoc[],
  cursorIndex: number,
  geometry: GraphGeometry = { width: 640, height: 180 },
): string {
  const { width, height } = geometry;
  const n = Math.max(points.length, 1);
  const maxCost = Math.max(...points.map((p) => p.cost), 1);
  const xOf = (index: number) => (index / n) * (width - 20) + 10;
  const yOf = (cost: number) =>
    height - 12 - Math.max(cost, 0) * ((height - 24) / maxCost);
  const parts: string[] = [
    `<svg class="graph" viewBox="0 0 ${width} ${height}" xmlns="http://www.w3.org/2000/svg">`,
    `<rect width="${width}" height="${height}" fill="#fcfcf7"/>`,
  ];
  for (const seg of segments) {
    parts.push(
      `<rect class="segment segment-${seg.kind}" x="${xOf(seg.start)}" y="0" ` +
        `width="${xOf(seg.end + 1) - xOf(seg.start)}" height="${height}" ` +
        `fill="#f97316" opacity="0.13"/>`,
    );
  }
  for (const p of points) {
    const x = xOf(p.index);
    const y = yOf(p.cost);
    const fill = p.sideToMove === 'black' ? '#1f2937' : '#9ca3af';
    parts.push(
      `<rect class="cost-mark" data-index="${p.index}" x="${x - 1.5}" ` +
        `y="${y}" width="3" height="${height - 12 - y}" fill="${fill}"/>`,
    );
  }
  const first = points[0]?.index ?? 0;
  const last = points[points.length - 1]?.index ?? 0;
  const lineY = (i: number) => yOf(baseline.intercept + baseline.slope * i);
  parts.push(
    `<line class="baseline" x1="${xOf(first)}" y1="${lineY(first)}" ` +
      `x2="${xOf(last)}" y2="${lineY(last)}" stroke="#ef4444" ` +
      `stroke-dasharray="6 4" stroke-width="1.5"/>`,
    `<line class="cursor" x1="${xOf(cursorIndex)}" y1="0" ` +
      `x2="${xOf(cursorIndex)}" y2="${height}" stroke="#2563eb" stroke-width="1.5"/>`,
    '</svg>',
  );
  return parts.join('');
}

export function renderSenteBadge(sente: boolean | null): string {
  if (sente === null) return `<span class="badge badge-off">–</span>`;
  return sente
    ? `<span class="badge badge-sente">sente</span>`
    : `<span class="badge badge-gote">gote</span>`;
}

export function renderViewHtml(state: ViewState): string {
  return [
    `<div class="meta">game ${state.gameId}, position ${state.index} / ${state.moves.length}</div>`,
    renderBoardSvg(state.board),
    renderGraphSvg(
      state.analysis.points,
      state.features.baseline,
      state.features.segments,
      state.index,
    ),
    renderSenteBadge(state.sente),
  ].join('\n');
}
