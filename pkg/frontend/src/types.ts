// Shapes mirrored from the session API payloads.

export interface BBox {
  x: number;
  y: number;
  w: number;
  h: number;
}

export interface SceneSummary {
  scene_id: string;
  object_count: number;
  has_image: boolean;
}

export interface SceneObject {
  id: number;
  name: string;
  attributes: string[];
  bbox?: BBox;
}

export interface SceneRelation {
  subject_id: number;
  predicate: string;
  object_id: number;
}

export interface SceneDocument {
  scene_id: string;
  image?: string;
  objects: SceneObject[];
  relationships: SceneRelation[];
}

export interface QuestionOption {
  edge: SceneRelation | null;
  focal_id: number;
  phrase: string;
  bbox: BBox | null;
}

export interface QuestionPayload {
  kind: 'validate' | 'select';
  text: string;
  options: QuestionOption[];
  allows_none: boolean;
}

export interface GroundedNode {
  node_id: number;
  name: string;
  bbox: BBox | null;
}

export type SessionStatus = 'awaiting_answer' | 'grounded' | 'failed';

export interface SessionSnapshot {
  session_id: string;
  scene_id: string;
  status: SessionStatus;
  interactions: number;
  pending: QuestionPayload | null;
  grounded: GroundedNode | null;
  failure_reason: string | null;
}

export type Reply =
  | { option: number }
  | { confirm: boolean }
  | { none: true };
