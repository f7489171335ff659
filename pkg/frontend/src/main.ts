import { ApiClient, NetworkError, NotFoundError } from './api.js';
import { DangerMeter, DangerLevelValue } from './danger.js';
import { LiveSession, SocketLike } from './live.js';
import { renderViewHtml } from './render.js';
import { loadGame, step, seek, ViewState } from './state.js';

// Browser wiring only; all logic lives in the DOM-free modules.

const api = new ApiClient((url) => fetch(url));
let state: ViewState | null = null;

const el = (id: string) => document.getElementById(id)!;

function redraw(): void {
  if (!state) return;
  el('view').innerHTML = renderViewHtml(state);
  const slider = el('slider') as HTMLInputElement;
  slider.max = String(state.moves.length);
  slider.value = String(state.index);
  reviewMeter.setLevel(state.dangerLevel);
  el('review-meter').innerHTML = reviewMeter.render();
}

const reviewMeter = new DangerMeter();

async function openGame(): Promise<void> {
  const gameId = (el('game-id') as HTMLInputElement).value.trim();
  const banner = el('banner');
  banner.textContent = '';
  banner.className = '';
  try {
    state = await loadGame(api, gameId);
    redraw();
  } catch (err) {
    if (err instanceof NotFoundError) {
      banner.textContent = `no analysis for game "${gameId}"`;
      banner.className = 'banner-error';
    } else if (err instanceof NetworkError) {
      banner.textContent = 'service unreachable, retry?';
      banner.className = 'banner-error banner-retry';
    } else {
      throw err;
    }
  }
}

el('open').addEventListener('click', () => void openGame());
el('back').addEventListener('click', () => {
  if (state) {
    state = step(state, -1);
    redraw();
  }
});
el('forward').addEventListener('click', () => {
  if (state) {
    state = step(state, +1);
    redraw();
  }
});
el('slider').addEventListener('input', (event) => {
  if (state) {
    state = seek(state, Number((event.target as HTMLInputElement).value));
    redraw();
  }
});

// ---------------------------------------------------------------------------
// Live play: the meter and sente badge update per move; the danger data
// never names a point on the board.

const liveMeter = new DangerMeter();
el('live-meter').innerHTML = liveMeter.render();

function browserSocket(): SocketLike {
  const proto = location.protocol === 'https:' ? 'wss' : 'ws';
  const ws = new WebSocket(`${proto}://${location.host}/live`);
  const adapter: SocketLike = {
    send: (data) => ws.send(data),
    close: () => ws.close(),
    onmessage: null,
    onclose: null,
    onopen: null,
  };
  ws.onmessage = (ev) => adapter.onmessage?.({ data: String(ev.data) });
  ws.onclose = () => adapter.onclose?.();
  ws.onopen = () => adapter.onopen?.();
  return adapter;
}

const session = new LiveSession(
  browserSocket,
  {
    onUpdate: (update) => {
      liveMeter.setLevel(update.dangerLevel as DangerLevelValue);
      el('live-meter').innerHTML = liveMeter.render();
      el('live-cost').textContent = update.cost.toFixed(2);
      el('live-sente').textContent = update.sente ? 'sente' : 'gote';
    },
    onStatus: (status) => {
      el('live-status').textContent = status;
    },
  },
);

el('live-connect').addEventListener('click', () => session.connect());
el('live-send').addEventListener('click', () => {
  const input = el('live-move') as HTMLInputElement;
  const [color, vertex] = input.value.trim().split(/\s+/);
  if (color && vertex) {
    session.play({
      color: color.toLowerCase().startsWith('b') ? 'black' : 'white',
      vertex: vertex.toUpperCase(),
    });
    input.value = '';
  }
});
