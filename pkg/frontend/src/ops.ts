/**
 * The augmentation operators over typed-array scans.
 *
 * Numerics deliberately mirror the batch implementation expression for
 * expression: azimuths in [-pi, pi) with the +pi seam mapped to -pi, sector
 * intervals inclusive at alpha / exclusive at beta with seam wraparound,
 * rotation arithmetic in float64 rounded once into float32, and the exact
 * rng draw schedule documented in the main README.  Given the same inputs
 * and seed, outputs are element-identical to the pipeline's.
 */

import { Pcg64 } from "./rng.js";
import { ScanView, checkView, concatScans, gatherRows, scanLength } from "./scan.js";

export const PI = Math.PI;
export const TWO_PI = 2 * Math.PI;
const OMEGA_STEP = (2 * Math.PI) / 3;
const HALF_PI = Math.PI / 2;

export interface SectorSpec {
  /** start azimuth, inclusive, in [-pi, pi) */
  alpha: number;
  /** end azimuth, exclusive, in [-pi, pi]; alpha > beta crosses the seam */
  beta: number;
}

export type AnglePresetName = "kitti3" | "perpendicular2" | "explicit";

export interface MixOptions {
  /** semantic ids cropped by the paste stage */
  classes: number[];
  sector_width_deg?: number;
  angle_preset?: AnglePresetName;
  /** only for angle_preset = "explicit" */
  angles_deg?: number[];
  delta1?: number;
  delta2?: number;
}

const MIX_OPTION_KEYS = new Set([
  "classes",
  "sector_width_deg",
  "angle_preset",
  "angles_deg",
  "delta1",
  "delta2",
]);

export function wrapAngle(angle: number): number {
  let a = angle;
  while (a < -PI) a += TWO_PI;
  while (a >= PI) a -= TWO_PI;
  return a;
}

export function degToRad(deg: number): number {
  return TWO_PI * (deg / 360.0);
}

function pointAzimuth(x: number, y: number): number {
  const t = Math.atan2(y, x);
  return t === PI ? -PI : t;
}

function inSector(theta: number, sector: SectorSpec): boolean {
  if (sector.alpha === sector.beta) return false;
  if (sector.alpha < sector.beta) return theta >= sector.alpha && theta < sector.beta;
  return theta >= sector.alpha || theta < sector.beta;
}

function checkSector(sector: SectorSpec): void {
  if (!(sector.alpha >= -PI && sector.alpha < PI)) {
    throw new Error(`sector alpha ${sector.alpha} outside [-pi, pi)`);
  }
  if (!(sector.beta >= -PI && sector.beta <= PI)) {
    throw new Error(`sector beta ${sector.beta} outside [-pi, pi]`);
  }
}

/** One draw: sector start uniform in [-pi, pi); width 2*pi is the full circle. */
export function sampleSector(width: number, rng: Pcg64): SectorSpec {
  if (!(width >= 0 && width <= TWO_PI)) {
    throw new Error(`sector width ${width} outside [0, 2*pi]`);
  }
  const alpha = -PI + TWO_PI * rng.random();
  if (width === TWO_PI) return { alpha: -PI, beta: PI };
  return { alpha: wrapAngle(alpha), beta: wrapAngle(alpha + width) };
}

/** kitti3: [0, (0,120], (120,240]] degrees; perpendicular2: [0, +-90] degrees. */
export function sampleAngles(
  preset: AnglePresetName,
  rng: Pcg64,
  explicitAngles: number[] = []
): number[] {
  if (preset === "kitti3") {
    const u1 = OMEGA_STEP * (1.0 - rng.random());
    const u2 = OMEGA_STEP * (2.0 - rng.random());
    return [0.0, u1, u2];
  }
  if (preset === "perpendicular2") {
    return [0.0, rng.random() < 0.5 ? HALF_PI : -HALF_PI];
  }
  return explicitAngles.slice();
}

/** Replace A's sector with B's points from the same sector (A's kept rows first). */
export function sceneSwap(viewA: ScanView, viewB: ScanView, sector: SectorSpec): ScanView {
  checkView(viewA, "scan A");
  checkView(viewB, "scan B");
  checkSector(sector);
  const keepA: number[] = [];
  for (let i = 0; i < scanLength(viewA); i++) {
    if (!inSector(pointAzimuth(viewA.points[4 * i], viewA.points[4 * i + 1]), sector)) {
      keepA.push(i);
    }
  }
  const takeB: number[] = [];
  for (let i = 0; i < scanLength(viewB); i++) {
    if (inSector(pointAzimuth(viewB.points[4 * i], viewB.points[4 * i + 1]), sector)) {
      takeB.push(i);
    }
  }
  return concatScans([gatherRows(viewA, keepA), gatherRows(viewB, takeB)]);
}

/** Append one z-rotated copy of B's class-cropped points per angle to A. */
export function rotatePaste(
  viewA: ScanView,
  viewB: ScanView,
  classes: Iterable<number>,
  omegas: number[]
): ScanView {
  checkView(viewA, "scan A");
  checkView(viewB, "scan B");
  const wanted = new Set<number>();
  for (const c of classes) wanted.add(c >>> 0);
  const crop: number[] = [];
  if (wanted.size > 0) {
    for (let i = 0; i < scanLength(viewB); i++) {
      if (wanted.has(viewB.labels[i] & 0xffff)) crop.push(i);
    }
  }
  if (omegas.length === 0 || crop.length === 0) {
    return { points: viewA.points.slice(), labels: viewA.labels.slice() };
  }
  const donors = gatherRows(viewB, crop);
  const parts: ScanView[] = [{ points: viewA.points, labels: viewA.labels }];
  for (const w of omegas) {
    const c = Math.cos(w);
    const s = Math.sin(w);
    const points = new Float32Array(donors.points.length);
    for (let i = 0; i < crop.length; i++) {
      const x = donors.points[4 * i];
      const y = donors.points[4 * i + 1];
      points[4 * i] = c * x - s * y;
      points[4 * i + 1] = s * x + c * y;
      points[4 * i + 2] = donors.points[4 * i + 2];
      points[4 * i + 3] = donors.points[4 * i + 3];
    }
    parts.push({ points, labels: donors.labels });
  }
  return concatScans(parts);
}

/** One uniform scale of x/y/z then one uniform z-rotation (draws: scale, angle). */
export function globalAug(
  view: ScanView,
  scaleRange: [number, number],
  seed: bigint | number
): ScanView {
  checkView(view, "scan");
  const [lo, hi] = scaleRange;
  if (!(lo > 0 && lo <= hi)) {
    throw new Error(`invalid scale range [${lo}, ${hi}]: need 0 < lo <= hi`);
  }
  const rng = new Pcg64(seed);
  const scale = lo + (hi - lo) * rng.random();
  const angle = -PI + TWO_PI * rng.random();
  const c = Math.cos(angle);
  const s = Math.sin(angle);
  const n = scanLength(view);
  const points = new Float32Array(n * 4);
  for (let i = 0; i < n; i++) {
    const x = scale * view.points[4 * i];
    const y = scale * view.points[4 * i + 1];
    const z = scale * view.points[4 * i + 2];
    points[4 * i] = c * x - s * y;
    points[4 * i + 1] = s * x + c * y;
    points[4 * i + 2] = z;
    points[4 * i + 3] = view.points[4 * i + 3];
  }
  return { points, labels: view.labels.slice() };
}

function resolveOptions(options: MixOptions) {
  for (const key of Object.keys(options)) {
    if (!MIX_OPTION_KEYS.has(key)) throw new Error(`unknown config key '${key}'`);
  }
  if (!Array.isArray(options.classes)) {
    throw new Error("config key 'classes' is required (array of semantic ids)");
  }
  const preset = options.angle_preset ?? "kitti3";
  if (preset !== "kitti3" && preset !== "perpendicular2" && preset !== "explicit") {
    throw new Error(`unknown angle_preset '${preset}'`);
  }
  const delta1 = options.delta1 ?? 0.5;
  const delta2 = options.delta2 ?? 1.0;
  for (const [name, v] of [["delta1", delta1], ["delta2", delta2]] as const) {
    if (!(v >= 0 && v <= 1)) throw new Error(`${name} ${v} outside [0, 1]`);
  }
  const width = degToRad(options.sector_width_deg ?? 180);
  if (!(width >= 0 && width <= TWO_PI)) {
    throw new Error(`sector_width_deg ${options.sector_width_deg} outside [0, 360]`);
  }
  return {
    classes: options.classes,
    width,
    preset,
    explicitAngles: (options.angles_deg ?? []).map(degToRad),
    delta1,
    delta2,
  };
}

/**
 * Gated sector swap then gated rotate-paste, from a single seed.
 *
 * Draw schedule (identical to the batch pipeline): gate-1 uniform; if it
 * fires (< delta1) one sector draw; gate-2 uniform; if it fires the
 * preset's angle draws.
 */
export function polarMix(
  viewA: ScanView,
  viewB: ScanView,
  options: MixOptions,
  seed: bigint | number
): ScanView {
  checkView(viewA, "scan A");
  checkView(viewB, "scan B");
  const cfg = resolveOptions(options);
  const rng = new Pcg64(seed);
  let result: ScanView = viewA;
  if (rng.random() < cfg.delta1) {
    const sector = sampleSector(cfg.width, rng);
    result = sceneSwap(result, viewB, sector);
  }
  if (rng.random() < cfg.delta2) {
    const omegas = sampleAngles(cfg.preset, rng, cfg.explicitAngles);
    result = rotatePaste(result, viewB, cfg.classes, omegas);
  }
  if (result === viewA) {
    return { points: viewA.points.slice(), labels: viewA.labels.slice() };
  }
  return result;
}
