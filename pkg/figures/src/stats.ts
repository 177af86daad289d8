/** Small statistics helpers for histogram construction. */

export function quantile(sorted: number[], q: number): number {
  if (sorted.length === 0) {
    throw new Error('quantile of empty array');
  }
  const pos = q * (sorted.length - 1);
  const lo = Math.floor(pos);
  const hi = Math.ceil(pos);
  const frac = pos - lo;
  return sorted[lo]! * (1 - frac) + sorted[hi]! * frac;
}

/** Freedman-Diaconis bin width with a Sturges fallback for degenerate IQR. */
export function autoBinWidth(values: number[]): number {
  const sorted = [...values].sort((a, b) => a - b);
  const iqr = quantile(sorted, 0.75) - quantile(sorted, 0.25);
  const span = sorted[sorted.length - 1]! - sorted[0]!;
  if (iqr > 0) {
    return (2 * iqr) / Math.cbrt(values.length);
  }
  return span / (Math.ceil(Math.log2(values.length)) + 1 || 1);
}

export interface Histogram {
  edges: number[];
  /** Normalized so the bars integrate to one (a density estimate). */
  density: number[];
}

export function histogramDensity(values: number[], binWidth?: number): Histogram {
  if (values.length === 0) {
    throw new Error('histogram of empty array');
  }
  const width = binWidth ?? autoBinWidth(values);
  if (!(width > 0)) {
    throw new Error(`histogram bin width must be positive, got ${width}`);
  }
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    lo = Math.min(lo, v);
    hi = Math.max(hi, v);
  }
  const nBins = Math.max(1, Math.ceil((hi - lo) / width));
  const counts = new Array<number>(nBins).fill(0);
  for (const v of values) {
    const bin = Math.min(nBins - 1, Math.floor((v - lo) / width));
    counts[bin]!++;
  }
  const edges: number[] = [];
  for (let i = 0; i <= nBins; i++) {
    edges.push(lo + i * width);
  }
  const density = counts.map((c) => c / (values.length * width));
  return { edges, density };
}
