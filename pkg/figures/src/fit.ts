import { numericColumn, readCsv, requireRows } from './csv.js';
import { GhParams } from './gh.js';

export interface FitRow extends GhParams {
  pds: number;
  loglik: number;
}

/** Rows of a fit.csv file, one fitted parameter set per delay spread. */
export function readFitRows(path: string): FitRow[] {
  const table = requireRows(readCsv(path));
  const pds = numericColumn(table, 'pds');
  const k = numericColumn(table, 'K');
  const sigmaISq = numericColumn(table, 'sigma_I_sq');
  const sigmaOSq = numericColumn(table, 'sigma_O_sq');
  const loglik = numericColumn(table, 'loglik');
  return pds.map((p, i) => ({
    pds: p,
    K: k[i]!,
    sigmaISq: sigmaISq[i]!,
    sigmaOSq: sigmaOSq[i]!,
    loglik: loglik[i]!,
  }));
}
