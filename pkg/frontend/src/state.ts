// View state and the pure helpers that derive what to render from it.
// The API snapshot is the single source of truth; nothing here mutates
// grounding state locally.

import type {
  BBox,
  SceneDocument,
  SceneSummary,
  SessionSnapshot,
} from './types.js';

export interface ViewState {
  scenes: SceneSummary[];
  scene: SceneDocument | null;
  imageAvailable: boolean;
  session: SessionSnapshot | null;
  hoveredOption: number | null;
  transcript: string[];
  error: string | null;
}

export function initialState(): ViewState {
  return {
    scenes: [],
    scene: null,
    imageAvailable: false,
    session: null,
    hoveredOption: null,
    transcript: [],
    error: null,
  };
}

export function withScene(
  state: ViewState,
  scene: SceneDocument,
  imageAvailable: boolean,
): ViewState {
  return {
    ...state,
    scene,
    imageAvailable,
    session: null,
    hoveredOption: null,
    transcript: [],
    error: null,
  };
}

export function describeSnapshot(snapshot: SessionSnapshot): string {
  if (snapshot.status === 'grounded' && snapshot.grounded) {
    return `grounded: ${snapshot.grounded.name} (node ${snapshot.grounded.node_id}) ` +
      `after ${snapshot.interactions} interaction(s)`;
  }
  if (snapshot.status === 'failed') {
    return `failed: ${snapshot.failure_reason ?? 'unknown reason'}`;
  }
  return snapshot.pending ? snapshot.pending.text : 'waiting';
}

export function withSession(state: ViewState, snapshot: SessionSnapshot): ViewState {
  return {
    ...state,
    session: snapshot,
    hoveredOption: null,
    transcript: [...state.transcript, describeSnapshot(snapshot)],
    error: null,
  };
}

export function withError(state: ViewState, message: string): ViewState {
  return { ...state, error: message };
}

export type HighlightKind = 'option' | 'hover' | 'grounded';

export interface Highlight {
  bbox: BBox;
  kind: HighlightKind;
  label: string;
}

// Boxes to overlay for the current session: every option faintly, the
// hovered option strongly, and the grounded target in its own style.
export function highlightBoxes(state: ViewState): Highlight[] {
  const session = state.session;
  if (!session) return [];
  if (session.status === 'grounded' && session.grounded?.bbox) {
    return [{
      bbox: session.grounded.bbox,
      kind: 'grounded',
      label: session.grounded.name,
    }];
  }
  const pending = session.pending;
  if (!pending) return [];
  return pending.options.flatMap((option, index) => {
    if (!option.bbox) return [];
    const kind: HighlightKind =
      index === state.hoveredOption ? 'hover' : 'option';
    return [{ bbox: option.bbox, kind, label: `${index + 1}` }];
  });
}

export function optionLabels(snapshot: SessionSnapshot): string[] {
  if (!snapshot.pending) return [];
  if (snapshot.pending.kind === 'validate') return ['yes', 'no'];
  return snapshot.pending.options.map((o, i) => `${i + 1}. ${o.phrase}`);
}
