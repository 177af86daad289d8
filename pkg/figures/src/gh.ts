/** The fitted marginal density of the synchronized gain, evaluated from
 * the parameters stored in fit.csv. This is the only place the figure
 * scripts compute model values; no simulation logic is duplicated.
 */

export interface GhParams {
  K: number;
  sigmaISq: number;
  sigmaOSq: number;
}

const SQRT_2PI = Math.sqrt(2 * Math.PI);

export function lambda0(p: GhParams): number {
  return Math.sqrt(p.sigmaOSq);
}

export function lambda1(p: GhParams): number {
  if (p.sigmaISq === 0) {
    return 0;
  }
  return Math.sqrt((p.sigmaISq * p.sigmaOSq) / (p.sigmaISq + p.sigmaOSq));
}

export function gaussianPdf(x: number, sigma: number): number {
  return Math.exp(-(x * x) / (2 * sigma * sigma)) / (SQRT_2PI * sigma);
}

/** Density value at x: a Gaussian of width lambda0 minus a K-weighted notch
 * of width lambda1, normalized to unit mass. K = 0 or a zero-width notch
 * reduces it to the plain Gaussian. */
export function ghPdf(p: GhParams, x: number): number {
  validate(p);
  const l0 = lambda0(p);
  if (p.K === 0 || p.sigmaISq === 0) {
    return gaussianPdf(x, l0);
  }
  const l1 = lambda1(p);
  const outer = Math.exp(-(x * x) / (2 * l0 * l0));
  const notch = Math.exp(-(x * x) / (2 * l1 * l1));
  return (outer - p.K * notch) / (SQRT_2PI * (l0 - p.K * l1));
}

/** Joint density of the complex gain: the product of the two marginals. */
export function ghComplexPdf(p: GhParams, x: number, y: number): number {
  return ghPdf(p, x) * ghPdf(p, y);
}

function validate(p: GhParams): void {
  if (!(p.K >= 0 && p.K <= 1)) {
    throw new Error(`fit parameter K must lie in [0, 1], got ${p.K}`);
  }
  if (!(p.sigmaOSq > 0)) {
    throw new Error(`fit parameter sigma_O_sq must be > 0, got ${p.sigmaOSq}`);
  }
  if (!(p.sigmaISq >= 0)) {
    throw new Error(`fit parameter sigma_I_sq must be >= 0, got ${p.sigmaISq}`);
  }
}

/** Evaluate the density on a regular n-point grid over [lo, hi]. */
export function ghPdfGrid(p: GhParams, lo: number, hi: number, n: number): { x: number[]; y: number[] } {
  const x: number[] = [];
  const y: number[] = [];
  for (let i = 0; i < n; i++) {
    const xi = lo + ((hi - lo) * i) / (n - 1);
    x.push(xi);
    y.push(ghPdf(p, xi));
  }
  return { x, y };
}
