/**
 * Deterministic random generator compatible with numpy's default_rng.
 *
 * Seeding follows SeedSequence (entropy-pool hashing of the 32-bit words of
 * the seed) and the stream is PCG64 (XSL-RR 128/64).  `random()` matches
 * numpy bit for bit: the top 53 bits of the next 64-bit output scaled by
 * 2^-53.  This is what lets the in-memory operators reproduce the batch
 * pipeline's draws exactly from a task seed.
 */

const INIT_A = 0x43b0d7e5;
const MULT_A = 0x931e8875;
const INIT_B = 0x8b51f9dd;
const MULT_B = 0x58f38ded;
const MIX_MULT_L = 0xca01f9dd;
const MIX_MULT_R = 0x4973f715;
const XSHIFT = 16;

const MASK64 = (1n << 64n) - 1n;
const MASK128 = (1n << 128n) - 1n;
const PCG_MULTIPLIER = 0x2360ed051fc65da44385df649fccf645n;

function u32(x: number): number {
  return x >>> 0;
}

/** Little-endian 32-bit words of a non-negative integer seed (zero -> [0]). */
export function entropyWords(seed: bigint): number[] {
  if (seed < 0n) throw new Error(`seed must be non-negative, got ${seed}`);
  if (seed === 0n) return [0];
  const words: number[] = [];
  let v = seed;
  while (v > 0n) {
    words.push(Number(v & 0xffffffffn));
    v >>= 32n;
  }
  return words;
}

export class SeedSequence {
  readonly pool: Uint32Array;

  constructor(seed: bigint) {
    this.pool = new Uint32Array(4);
    this.mixEntropy(entropyWords(seed));
  }

  private mixEntropy(entropy: number[]): void {
    let hashConst = u32(INIT_A);
    const hashmix = (value: number): number => {
      value = u32(value ^ hashConst);
      hashConst = u32(Math.imul(hashConst, MULT_A));
      value = u32(Math.imul(value, hashConst));
      return u32(value ^ (value >>> XSHIFT));
    };
    const mix = (x: number, y: number): number => {
      let r = u32(Math.imul(x, MIX_MULT_L) - Math.imul(y, MIX_MULT_R));
      return u32(r ^ (r >>> XSHIFT));
    };
    const pool = this.pool;
    for (let i = 0; i < pool.length; i++) {
      pool[i] = hashmix(i < entropy.length ? entropy[i] : 0);
    }
    for (let iSrc = pool.length; iSrc < entropy.length; iSrc++) {
      const iDst = iSrc % pool.length;
      pool[iDst] = mix(pool[iDst], hashmix(entropy[iSrc]));
    }
    for (let iSrc = 0; iSrc < pool.length; iSrc++) {
      for (let iDst = 0; iDst < pool.length; iDst++) {
        if (iSrc !== iDst) pool[iDst] = mix(pool[iDst], hashmix(pool[iSrc]));
      }
    }
  }

  /** n 64-bit state words (pairs of hashed 32-bit words, low word first). */
  generateState(nWords: number): bigint[] {
    let hashConst = u32(INIT_B);
    const words32 = new Uint32Array(nWords * 2);
    for (let iDst = 0; iDst < words32.length; iDst++) {
      let v = this.pool[iDst % this.pool.length];
      v = u32(v ^ hashConst);
      hashConst = u32(Math.imul(hashConst, MULT_B));
      v = u32(Math.imul(v, hashConst));
      words32[iDst] = u32(v ^ (v >>> XSHIFT));
    }
    const out: bigint[] = [];
    for (let i = 0; i < nWords; i++) {
      out.push(BigInt(words32[2 * i]) | (BigInt(words32[2 * i + 1]) << 32n));
    }
    return out;
  }
}

export class Pcg64 {
  private state: bigint;
  private readonly inc: bigint;

  constructor(seed: bigint | number) {
    const words = new SeedSequence(BigInt(seed)).generateState(4);
    const initstate = ((words[0] << 64n) | words[1]) & MASK128;
    const initseq = ((words[2] << 64n) | words[3]) & MASK128;
    this.inc = ((initseq << 1n) | 1n) & MASK128;
    this.state = 0n;
    this.step();
    this.state = (this.state + initstate) & MASK128;
    this.step();
  }

  private step(): void {
    this.state = (this.state * PCG_MULTIPLIER + this.inc) & MASK128;
  }

  /** Internal 128-bit (state, inc), for validation against the reference. */
  getState(): { state: bigint; inc: bigint } {
    return { state: this.state, inc: this.inc };
  }

  nextUint64(): bigint {
    this.step();
    const xored = ((this.state >> 64n) ^ (this.state & MASK64)) & MASK64;
    const rot = this.state >> 122n;
    return ((xored >> rot) | ((xored << ((64n - rot) & 63n)) & MASK64)) & MASK64;
  }

  /** Uniform double in [0, 1), identical to numpy Generator.random(). */
  random(): number {
    return Number(this.nextUint64() >> 11n) * 2 ** -53;
  }
}
