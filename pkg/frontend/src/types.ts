export type ColorName = 'black' | 'white';

export interface PointRow {
  index: number;
  sideToMove: ColorName;
  scoreMeanBefore: number;
  scoreMeanAfterPass: number;
  cost: number;
  winRate: number;
  effect: number | null;
}

export interface AnalysisDoc {
  game: {
    boardSize: number;
    komi: number;
    rules: string;
    handicapStones: number[][];
    moveCount: number;
    moves: string[][];
    metadata: Record<string, string>;
  };
  engine: Record<string, unknown>;
  visits: number;
  passMoves: number[];
  points: PointRow[];
}

export interface BaselineDoc {
  slope: number;
  intercept: number;
  residualScale: number;
  inlierCount: number;
  inlierIndices: number[];
}

export interface SegmentDoc {
  start: number;
  end: number;
  kind: string;
  defender: ColorName | null;
  peak: number;
}

export interface FeaturesDoc {
  baseline: BaselineDoc;
  tau: number;
  segments: SegmentDoc[];
  stages: { stage: string; start: number; end: number }[];
  sente: { index: number; state: 'sente' | 'gote'; residual: number }[];
  pointsOfInterest: { start: number; end: number; kind: string; magnitude: number }[];
}

/** One move of the reconstructed game: vertex like "Q16", or "pass". */
export interface GameMove {
  color: ColorName;
  vertex: string;
}

/** Wire format of one /live update. Deliberately carries no location. */
export interface LiveUpdate {
  index: number;
  cost: number;
  dangerLevel: 0 | 1 | 2 | 3;
  sente: boolean;
}
