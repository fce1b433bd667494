// DOM wiring: scene picker, expression form, question panel, canvas.

import { ApiClient, ApiError } from './api.js';
import { drawScene } from './canvas.js';
import {
  type ViewState,
  highlightBoxes,
  initialState,
  withError,
  withScene,
  withSession,
} from './state.js';
import type { Reply } from './types.js';

const api = new ApiClient();
let state: ViewState = initialState();
let image: HTMLImageElement | null = null;

function byId<T extends HTMLElement>(id: string): T {
  const element = document.getElementById(id);
  if (!element) throw new Error(`missing element #${id}`);
  return element as T;
}

const sceneList = byId<HTMLSelectElement>('scene-list');
const expressionInput = byId<HTMLInputElement>('expression');
const startButton = byId<HTMLButtonElement>('start');
const questionText = byId<HTMLDivElement>('question-text');
const optionsBox = byId<HTMLDivElement>('options');
const statusLine = byId<HTMLDivElement>('status-line');
const transcriptBox = byId<HTMLUListElement>('transcript');
const errorBanner = byId<HTMLDivElement>('error-banner');
const errorText = byId<HTMLSpanElement>('error-text');
const retryButton = byId<HTMLButtonElement>('retry');
const canvas = byId<HTMLCanvasElement>('scene-canvas');
const ctx = canvas.getContext('2d');

function setState(next: ViewState): void {
  state = next;
  render();
}

function fail(err: unknown): void {
  const message = err instanceof ApiError
    ? `${err.status}: ${err.message}`
    : String(err);
  setState(withError(state, message));
}

async function loadScenes(): Promise<void> {
  try {
    const scenes = await api.listScenes();
    setState({ ...state, scenes, error: null });
  } catch (err) {
    fail(err);
  }
}

async function selectScene(sceneId: string): Promise<void> {
  try {
    const doc = await api.getScene(sceneId);
    const summary = state.scenes.find((s) => s.scene_id === sceneId);
    const hasImage = summary?.has_image ?? false;
    image = null;
    if (hasImage) {
      image = await loadImage(api.imageUrl(sceneId));
    }
    setState(withScene(state, doc, image !== null));
  } catch (err) {
    fail(err);
  }
}

function loadImage(url: string): Promise<HTMLImageElement | null> {
  return new Promise((resolve) => {
    const img = new Image();
    img.onload = () => resolve(img);
    img.onerror = () => resolve(null); // fall back to the schematic canvas
    img.src = url;
  });
}

async function startSession(): Promise<void> {
  if (!state.scene) return;
  const expression = expressionInput.value.trim();
  if (!expression) return;
  try {
    setState(withSession(state, await api.startSession(state.scene.scene_id, expression)));
  } catch (err) {
    fail(err);
  }
}

async function sendReply(reply: Reply): Promise<void> {
  const session = state.session;
  if (!session) return;
  try {
    setState(withSession(state, await api.answer(session.session_id, reply)));
  } catch (err) {
    fail(err);
  }
}

function optionButton(label: string, reply: Reply, hoverIndex: number | null): HTMLButtonElement {
  const button = document.createElement('button');
  button.textContent = label;
  button.addEventListener('click', () => void sendReply(reply));
  if (hoverIndex !== null) {
    button.addEventListener('mouseenter', () => {
      setState({ ...state, hoveredOption: hoverIndex });
    });
    button.addEventListener('mouseleave', () => {
      setState({ ...state, hoveredOption: null });
    });
  }
  return button;
}

function renderQuestion(): void {
  optionsBox.replaceChildren();
  const session = state.session;
  if (!session) {
    questionText.textContent = state.scene
      ? 'Type a referring expression to start.'
      : 'Pick a scene.';
    return;
  }
  if (session.status === 'grounded' && session.grounded) {
    questionText.textContent =
      `Grounded: ${session.grounded.name} (node ${session.grounded.node_id})`;
    return;
  }
  if (session.status === 'failed') {
    questionText.textContent = `Failed: ${session.failure_reason}`;
    return;
  }
  const pending = session.pending;
  if (!pending) return;
  questionText.textContent = pending.text;
  if (pending.kind === 'validate') {
    optionsBox.append(
      optionButton('yes', { confirm: true }, 0),
      optionButton('no', { confirm: false }, null),
    );
  } else {
    pending.options.forEach((option, index) => {
      optionsBox.append(
        optionButton(`${index + 1}. ${option.phrase}`, { option: index + 1 }, index),
      );
    });
  }
  optionsBox.append(optionButton('none of these', { none: true }, null));
}

function render(): void {
  sceneList.replaceChildren(
    ...state.scenes.map((scene) => {
      const option = document.createElement('option');
      option.value = scene.scene_id;
      option.textContent =
        `${scene.scene_id} (${scene.object_count} objects` +
        `${scene.has_image ? ', image' : ''})`;
      return option;
    }),
  );
  if (state.scene) sceneList.value = state.scene.scene_id;

  renderQuestion();

  const session = state.session;
  statusLine.textContent = session
    ? `status: ${session.status} | interactions: ${session.interactions}`
    : '';
  transcriptBox.replaceChildren(
    ...state.transcript.map((line) => {
      const item = document.createElement('li');
      item.textContent = line;
      return item;
    }),
  );
  errorBanner.hidden = state.error === null;
  errorText.textContent = state.error ?? '';

  if (ctx && state.scene) {
    drawScene(ctx, state.scene.objects, image, highlightBoxes(state),
      canvas.width, canvas.height);
  } else if (ctx) {
    ctx.clearRect(0, 0, canvas.width, canvas.height);
  }
}

sceneList.addEventListener('change', () => void selectScene(sceneList.value));
startButton.addEventListener('click', () => void startSession());
expressionInput.addEventListener('keydown', (event) => {
  if (event.key === 'Enter') void startSession();
});
retryButton.addEventListener('click', () => {
  setState({ ...state, error: null });
  void loadScenes();
});

void loadScenes().then(() => {
  if (state.scenes.length > 0) void selectScene(state.scenes[0].scene_id);
});
