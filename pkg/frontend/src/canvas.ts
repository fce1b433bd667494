// Scene rendering: the image with box overlays when available, otherwise a
// schematic canvas of labeled rectangles built from the bboxes alone.

import type { Highlight } from './state.js';
import type { BBox, SceneObject } from './types.js';

export interface Extent {
  w: number;
  h: number;
}

export interface Transform {
  scale: number;
  dx: number;
  dy: number;
}

export function sceneExtent(objects: SceneObject[]): Extent {
  let maxX = 0;
  let maxY = 0;
  for (const object of objects) {
    if (!object.bbox) continue;
    maxX = Math.max(maxX, object.bbox.x + object.bbox.w);
    maxY = Math.max(maxY, object.bbox.y + object.bbox.h);
  }
  return { w: Math.max(maxX, 1), h: Math.max(maxY, 1) };
}

export function fitTransform(
  extent: Extent,
  canvasW: number,
  canvasH: number,
  pad = 12,
): Transform {
  const scale = Math.min(
    (canvasW - 2 * pad) / extent.w,
    (canvasH - 2 * pad) / extent.h,
  );
  const dx = (canvasW - extent.w * scale) / 2;
  const dy = (canvasH - extent.h * scale) / 2;
  return { scale, dx, dy };
}

export function applyToRect(t: Transform, box: BBox): BBox {
  return {
    x: t.dx + box.x * t.scale,
    y: t.dy + box.y * t.scale,
    w: box.w * t.scale,
    h: box.h * t.scale,
  };
}

const HIGHLIGHT_STYLE: Record<Highlight['kind'], { stroke: string; width: number }> = {
  option: { stroke: '#58a6ff', width: 2 },
  hover: { stroke: '#f0c040', width: 4 },
  grounded: { stroke: '#3fb950', width: 4 },
};

function drawLabel(
  ctx: CanvasRenderingContext2D,
  text: string,
  x: number,
  y: number,
  color: string,
): void {
  ctx.font = '13px sans-serif';
  const width = ctx.measureText(text).width + 8;
  ctx.fillStyle = 'rgba(0, 0, 0, 0.65)';
  ctx.fillRect(x, Math.max(0, y - 17), width, 17);
  ctx.fillStyle = color;
  ctx.fillText(text, x + 4, Math.max(12, y - 4));
}

export function drawScene(
  ctx: CanvasRenderingContext2D,
  objects: SceneObject[],
  image: HTMLImageElement | null,
  highlights: Highlight[],
  canvasW: number,
  canvasH: number,
): void {
  ctx.clearRect(0, 0, canvasW, canvasH);
  const extent = image
    ? { w: image.naturalWidth, h: image.naturalHeight }
    : sceneExtent(objects);
  const t = fitTransform(extent, canvasW, canvasH);

  if (image) {
    ctx.drawImage(image, t.dx, t.dy, extent.w * t.scale, extent.h * t.scale);
  } else {
    // schematic fallback: neutral canvas with one labeled box per object
    ctx.fillStyle = '#161b22';
    ctx.fillRect(0, 0, canvasW, canvasH);
    for (const object of objects) {
      if (!object.bbox) continue;
      const r = applyToRect(t, object.bbox);
      ctx.strokeStyle = '#8b949e';
      ctx.lineWidth = 1;
      ctx.strokeRect(r.x, r.y, r.w, r.h);
      const label = [...object.attributes, object.name].join(' ');
      drawLabel(ctx, label, r.x, r.y, '#c9d1d9');
    }
  }

  for (const highlight of highlights) {
    const style = HIGHLIGHT_STYLE[highlight.kind];
    const r = applyToRect(t, highlight.bbox);
    ctx.strokeStyle = style.stroke;
    ctx.lineWidth = style.width;
    ctx.strokeRect(r.x, r.y, r.w, r.h);
    drawLabel(ctx, highlight.label, r.x, r.y, style.stroke);
  }
}
