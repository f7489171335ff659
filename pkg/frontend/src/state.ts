import { Board, boardAfter, wireMoves } from './board.js';
import type { AnalysisDoc, FeaturesDoc, GameMove } from './types.js';
import { ApiClient } from './api.js';

export type ConnectionStatus = 'idle' | 'connected' | 'reconnecting' | 'lost';

/** Everything the screen shows for one game at one position. */
export interface ViewState {
  gameId: string;
  analysis: AnalysisDoc;
  features: FeaturesDoc;
  moves: GameMove[];
  index: number; // current position, 0..N
  board: Board;
  dangerLevel: 0 | 1 | 2 | 3;
  sente: boolean | null; // null past the analyzed range
  connection: ConnectionStatus;
}

function residualInMads(
  features: FeaturesDoc,
  index: number,
  cost: number,
): number {
  const { slope, intercept, residualScale } = features.baseline;
  const residual = cost - (intercept + slope * index);
  return residual / Math.max(residualScale, 1e-12);
}

export function dangerLevelAt(
  features: FeaturesDoc,
  index: number,
  cost: number,
): 0 | 1 | 2 | 3 {
  const mads = residualInMads(features, index, cost);
  if (mads <= 1) return 0;
  if (mads <= 2) return 1;
  if (mads <= 4) return 2;
  return 3;
}

function stateAt(
  gameId: string,
  analysis: AnalysisDoc,
  features: FeaturesDoc,
  moves: GameMove[],
  index: number,
): ViewState {
  const point = analysis.points.find((p) => p.index === index);
  const senteEntry = features.sente.find((s) => s.index === index);
  return {
    gameId,
    analysis,
    features,
    moves,
    index,
    board: boardAfter(
      moves,
      index,
      analysis.game.boardSize,
      analysis.game.handicapStones,
    ),
    dangerLevel: point ? dangerLevelAt(features, index, point.cost) : 0,
    sente: senteEntry ? senteEntry.state === 'sente' : null,
    connection: 'idle',
  };
}

/** Fetch a game's analysis and features and open it at position 0. */
export async function loadGame(
  api: ApiClient,
  gameId: string,
): Promise<ViewState> {
  const analysis = await api.loadAnalysis(gameId);
  const features = await api.loadFeatures(gameId);
  const moves = wireMoves(
    (analysis.game.moves ?? []) as [string, string][],
  );
  return stateAt(gameId, analysis, features, moves, 0);
}

/** Move the playback cursor; the index clamps to [0, N]. */
export function step(state: ViewState, delta: number): ViewState {
  const max = state.moves.length;
  const index = Math.min(Math.max(state.index + delta, 0), max);
  if (index === state.index) return state;
  const next = stateAt(
    state.gameId,
    state.analysis,
    state.features,
    state.moves,
    index,
  );
  next.connection = state.connection;
  return next;
}

export function seek(state: ViewState, index: number): ViewState {
  return step(state, index - state.index);
}
