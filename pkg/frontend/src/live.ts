import type { GameMove, LiveUpdate } from './types.js';

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onmessage: ((event: { data: string }) => void) | null;
  onclose: (() => void) | null;
  onopen: (() => void) | null;
}

export type SocketFactory = () => SocketLike;

export interface LiveHandlers {
  onUpdate(update: LiveUpdate): void;
  onStatus?(status: 'connected' | 'reconnecting' | 'lost'): void;
}

/**
 * Live-play session over the /live WebSocket. Every entered move is sent
 * as {move: {color, vertex}}; on connection loss the full move list is
 * replayed on a fresh socket, and updates for already-acknowledged
 * indices are swallowed so the final state is identical.
 */
export class LiveSession {
  private socket: SocketLike | null = null;
  private moves: GameMove[] = [];
  private acknowledged = 0;
  private attempts = 0;
  lastUpdate: LiveUpdate | null = null;

  constructor(
    private readonly factory: SocketFactory,
    private readonly handlers: LiveHandlers,
    private readonly maxReconnects: number = 5,
  ) {}

  connect(): void {
    const socket = this.factory();
    this.socket = socket;
    socket.onopen = () => {
      this.handlers.onStatus?.('connected');
      // Replay history so the server rebuilds the same game.
      for (const move of this.moves) {
        socket.send(JSON.stringify({ move }));
      }
    };
    socket.onmessage = (event) => {
      const payload = JSON.parse(event.data) as LiveUpdate | { error: string };
      if ('error' in payload) return;
      // The high-water mark survives reconnects, so replayed updates for
      // moves already shown are swallowed and the state cannot regress.
      if (payload.index <= this.acknowledged) return;
      this.acknowledged = payload.index;
      this.lastUpdate = payload;
      this.handlers.onUpdate(payload);
    };
    socket.onclose = () => {
      if (this.socket !== socket) return;
      this.socket = null;
      this.attempts += 1;
      if (this.attempts > this.maxReconnects) {
        this.handlers.onStatus?.('lost');
        return;
      }
      this.handlers.onStatus?.('reconnecting');
      this.connect();
    };
  }

  play(move: GameMove): void {
    this.moves.push(move);
    this.socket?.send(JSON.stringify({ move }));
  }

  moveCount(): number {
    return this.moves.length;
  }

  close(): void {
    const socket = this.socket;
    this.socket = null;
    socket?.close();
  }
}
