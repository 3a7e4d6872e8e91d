import { execFileSync } from "node:child_process";
import { mkdirSync, readFileSync, writeFileSync } from "node:fs";
import { join } from "node:path";

import { Pcg64 } from "../src/rng.js";
import { ScanView } from "../src/scan.js";

export function encodePoints(points: Float32Array): Buffer {
  const buf = Buffer.alloc(points.length * 4);
  const dv = new DataView(buf.buffer, buf.byteOffset, buf.byteLength);
  for (let i = 0; i < points.length; i++) dv.setFloat32(4 * i, points[i], true);
  return buf;
}

export function encodeLabels(labels: Uint32Array): Buffer {
  const buf = Buffer.alloc(labels.length * 4);
  const dv = new DataView(buf.buffer, buf.byteOffset, buf.byteLength);
  for (let i = 0; i < labels.length; i++) dv.setUint32(4 * i, labels[i], true);
  return buf;
}

export function decodeScan(scanBytes: Buffer, labelBytes: Buffer): ScanView {
  const pv = new DataView(scanBytes.buffer, scanBytes.byteOffset, scanBytes.byteLength);
  const points = new Float32Array(scanBytes.length / 4);
  for (let i = 0; i < points.length; i++) points[i] = pv.getFloat32(4 * i, true);
  const lv = new DataView(labelBytes.buffer, labelBytes.byteOffset, labelBytes.byteLength);
  const labels = new Uint32Array(labelBytes.length / 4);
  for (let i = 0; i < labels.length; i++) labels[i] = lv.getUint32(4 * i, true);
  return { points, labels };
}

export function readScanFiles(dir: string, name: string): ScanView {
  return decodeScan(
    readFileSync(join(dir, `${name}.bin`)),
    readFileSync(join(dir, `${name}.label`))
  );
}

export function writeScanFiles(dir: string, name: string, view: ScanView): void {
  mkdirSync(dir, { recursive: true });
  writeFileSync(join(dir, `${name}.bin`), encodePoints(view.points));
  writeFileSync(join(dir, `${name}.label`), encodeLabels(view.labels));
}

/** Random scan via the numpy-compatible generator (any stream works here). */
export function randomScan(rng: Pcg64, n: number, classIds: number[] = [10, 11, 30, 40, 48]): ScanView {
  const points = new Float32Array(n * 4);
  const labels = new Uint32Array(n);
  for (let i = 0; i < n; i++) {
    points[4 * i] = -60 + 120 * rng.random();
    points[4 * i + 1] = -60 + 120 * rng.random();
    points[4 * i + 2] = -4 + 8 * rng.random();
    points[4 * i + 3] = rng.random();
    const sem = classIds[Math.floor(rng.random() * classIds.length)];
    const inst = Math.floor(rng.random() * 0xffff);
    labels[i] = ((inst << 16) >>> 0) | sem;
  }
  return { points, labels };
}

export function writeConfig(path: string, entries: Record<string, string | number>): void {
  const text = Object.entries(entries)
    .map(([k, v]) => `${k} = ${v}`)
    .join("\n");
  writeFileSync(path, text + "\n");
}

/** Invoke the batch CLI (override the executable with POLARMIX_CLI). */
export function runCli(args: string[]): string {
  const exe = process.env.POLARMIX_CLI ?? "augment";
  return execFileSync(exe, args, { encoding: "utf8" });
}

/** Per-task seed of the batch pipeline: sha256("<seed>:<aIndex>:<slot>")[0..8] LE. */
export async function deriveTaskSeed(seed: number, aIndex: number, slot: number): Promise<bigint> {
  const { createHash } = await import("node:crypto");
  const digest = createHash("sha256").update(`${seed}:${aIndex}:${slot}`).digest();
  return digest.readBigUInt64LE(0);
}

export function viewsEqual(a: ScanView, b: ScanView): boolean {
  return (
    encodePoints(a.points).equals(encodePoints(b.points)) &&
    encodeLabels(a.labels).equals(encodeLabels(b.labels))
  );
}
