import type { AnalysisDoc, FeaturesDoc } from './types.js';

export class NotFoundError extends Error {}
export class NetworkError extends Error {}

export type FetchLike = (url: string) => Promise<{
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}>;

/** Thin client over the documented service endpoints; fetch is injectable
 * so tests run without a server. */
export class ApiClient {
  constructor(
    private readonly fetchImpl: FetchLike,
    private readonly base: string = '',
  ) {}

  private async getJson(path: string): Promise<unknown> {
    let response;
    try {
      response = await this.fetchImpl(`${this.base}${path}`);
    } catch (err) {
      throw new NetworkError(`service unreachable: ${err}`);
    }
    if (response.status === 404) {
      throw new NotFoundError(path);
    }
    if (!response.ok) {
      throw new NetworkError(`${path} -> HTTP ${response.status}`);
    }
    return response.json();
  }

  async loadAnalysis(gameId: string): Promise<AnalysisDoc> {
    return (await this.getJson(`/games/${gameId}/analysis`)) as AnalysisDoc;
  }

  async loadFeatures(gameId: string): Promise<FeaturesDoc> {
    return (await this.getJson(`/games/${gameId}/features`)) as FeaturesDoc;
  }
}
