/**
 * In-memory typed-array interface to the polar cut-and-mix augmentation
 * operators, for training loops that cannot afford file round trips.
 *
 * The four operators (`polarMix`, `sceneSwap`, `rotatePaste`, `globalAug`)
 * take caller-owned buffers, never mutate them, and return freshly
 * allocated outputs that are element-identical to the batch pipeline's
 * results for the same inputs, configuration, and seed.
 */

export { VERSION } from "./version.js";
export { Pcg64, SeedSequence, entropyWords } from "./rng.js";
export {
  ScanView,
  checkView,
  concatScans,
  emptyScan,
  gatherRows,
  scanLength,
} from "./scan.js";
export {
  AnglePresetName,
  MixOptions,
  SectorSpec,
  degToRad,
  globalAug,
  polarMix,
  rotatePaste,
  sampleAngles,
  sampleSector,
  sceneSwap,
  wrapAngle,
} from "./ops.js";
