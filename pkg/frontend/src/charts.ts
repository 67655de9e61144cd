/** Canvas charts. Inputs are observation rows and server-sampled prediction
 * grids; everything here is projection onto pixels (display formatting),
 * never evaluation of a model. */

export interface XY {
  x: number;
  y: number;
  excluded?: boolean;
}

interface Frame {
  x0: number;
  y0: number;
  px: (x: number) => number;
  py: (y: number) => number;
}

function frame(
  ctx: CanvasRenderingContext2D,
  xs: number[],
  ys: number[],
  width: number,
  height: number,
): Frame {
  const pad = 36;
  const xMin = Math.min(...xs);
  const xMax = Math.max(...xs);
  const yMin = Math.min(...ys);
  const yMax = Math.max(...ys);
  const xSpan = xMax - xMin || 1;
  const ySpan = yMax - yMin || 1;
  ctx.strokeStyle = "#888";
  ctx.strokeRect(pad, pad / 2, width - pad * 1.5, height - pad * 1.5);
  return {
    x0: pad,
    y0: height - pad,
    px: (x) => pad + ((x - xMin) / xSpan) * (width - pad * 1.5),
    py: (y) => height - pad - ((y - yMin) / ySpan) * (height - pad * 1.5),
  };
}

/** Observations as dots (excluded ones hollow) with the fitted curve. */
export function drawScatterWithCurve(
  canvas: HTMLCanvasElement,
  points: XY[],
  curve: XY[],
): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const all = [...points, ...curve];
  if (all.length === 0) return;
  const f = frame(ctx, all.map((p) => p.x), all.map((p) => p.y), canvas.width, canvas.height);

  ctx.strokeStyle = "#0a6cbd";
  ctx.lineWidth = 1.5;
  ctx.beginPath();
  curve.forEach((p, i) => {
    if (i === 0) ctx.moveTo(f.px(p.x), f.py(p.y));
    else ctx.lineTo(f.px(p.x), f.py(p.y));
  });
  ctx.stroke();

  for (const p of points) {
    ctx.beginPath();
    ctx.arc(f.px(p.x), f.py(p.y), 3.5, 0, Math.PI * 2);
    if (p.excluded) {
      ctx.strokeStyle = "#b33";
      ctx.stroke();
    } else {
      ctx.fillStyle = "#223";
      ctx.fill();
    }
  }
}

/** Filled contour of a server-sampled surface with the optimum marked. */
export function drawContour(
  canvas: HTMLCanvasElement,
  xs: number[],
  ys: number[],
  values: number[][],
  optimum: { x: number; y: number } | null,
): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  if (xs.length < 2 || ys.length < 2) return;
  const flat = values.flat();
  const vMin = Math.min(...flat);
  const vMax = Math.max(...flat);
  const span = vMax - vMin || 1;
  const f = frame(ctx, xs, ys, canvas.width, canvas.height);

  for (let i = 0; i < xs.length - 1; i++) {
    for (let j = 0; j < ys.length - 1; j++) {
      const v = (values[j]?.[i] ?? vMin) - vMin;
      const t = v / span;
      const hue = 220 - 180 * t;
      ctx.fillStyle = `hsl(${hue}, 70%, ${85 - 35 * t}%)`;
      const x = f.px(xs[i] ?? 0);
      const y = f.py(ys[j + 1] ?? 0);
      ctx.fillRect(
        x,
        y,
        f.px(xs[i + 1] ?? 0) - x + 1,
        f.py(ys[j] ?? 0) - y + 1,
      );
    }
  }
  if (optimum) {
    ctx.strokeStyle = "#000";
    ctx.lineWidth = 1.5;
    const cx = f.px(optimum.x);
    const cy = f.py(optimum.y);
    ctx.beginPath();
    ctx.moveTo(cx - 6, cy);
    ctx.lineTo(cx + 6, cy);
    ctx.moveTo(cx, cy - 6);
    ctx.lineTo(cx, cy + 6);
    ctx.stroke();
    ctx.beginPath();
    ctx.arc(cx, cy, 4, 0, Math.PI * 2);
    ctx.stroke();
  }
}
