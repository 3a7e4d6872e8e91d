/**
 * Caller-owned scan buffers: a flat (N x 4) float32 point array
 * (x, y, z, intensity) paired with N uint32 labels (low 16 bits semantic id,
 * high 16 bits instance id).  Inputs are read zero-copy and never mutated;
 * every operator allocates fresh output arrays.
 */

export interface ScanView {
  /** length 4*N, row-major x, y, z, intensity */
  points: Float32Array;
  /** length N */
  labels: Uint32Array;
}

export function scanLength(view: ScanView): number {
  return view.labels.length;
}

export function checkView(view: ScanView, name: string): void {
  if (!(view.points instanceof Float32Array) || !(view.labels instanceof Uint32Array)) {
    throw new Error(`${name}: points must be Float32Array and labels Uint32Array`);
  }
  if (view.points.length !== 4 * view.labels.length) {
    throw new Error(
      `${name}: inconsistent buffers - ${view.points.length} point values ` +
        `(not 4 x ${view.labels.length} labels)`
    );
  }
}

export function emptyScan(): ScanView {
  return { points: new Float32Array(0), labels: new Uint32Array(0) };
}

/** Fresh output built from selected row indices of the inputs, in order. */
export function gatherRows(view: ScanView, indices: number[]): ScanView {
  const points = new Float32Array(indices.length * 4);
  const labels = new Uint32Array(indices.length);
  for (let k = 0; k < indices.length; k++) {
    const i = indices[k];
    points.set(view.points.subarray(4 * i, 4 * i + 4), 4 * k);
    labels[k] = view.labels[i];
  }
  return { points, labels };
}

export function concatScans(parts: ScanView[]): ScanView {
  let n = 0;
  for (const part of parts) n += part.labels.length;
  const points = new Float32Array(n * 4);
  const labels = new Uint32Array(n);
  let at = 0;
  for (const part of parts) {
    points.set(part.points, at * 4);
    labels.set(part.labels, at);
    at += part.labels.length;
  }
  return { points, labels };
}
