import { resolve } from 'path';
import { fileURLToPath } from 'url';

import { numericColumn, readCsv, requireRows, stringColumn } from './csv.js';
import { FigureSpec, footerText, parseArgs, runMain, writeFigure } from './figure.js';
import { readFitRows } from './fit.js';
import {
  PALETTE,
  Scale,
  axisBottom,
  axisLeft,
  circle,
  linearScale,
  logScale,
  polygon,
  polyline,
  svgDocument,
  text,
} from './svg.js';

const UNDERSAMPLED_ERRORS = 100;

interface BerPoint {
  snrDb: number;
  ber: number;
  bits: number;
  errors: number;
}

interface BerCurve {
  scheme: string;
  pds: number;
  points: BerPoint[];
}

const WIDTH = 680;
const HEIGHT = 500;
const MARGIN = { left: 70, right: 180, top: 48, bottom: 72 };

export function loadBerCurves(path: string): BerCurve[] {
  const table = requireRows(readCsv(path));
  const scheme = stringColumn(table, 'scheme');
  const pds = numericColumn(table, 'pds');
  const snr = numericColumn(table, 'gamma_bar_db');
  const bits = numericColumn(table, 'bits');
  const errors = numericColumn(table, 'errors');
  const ber = numericColumn(table, 'ber');
  const byKey = new Map<string, BerCurve>();
  for (let i = 0; i < scheme.length; i++) {
    const key = `${scheme[i]}@${pds[i]}`;
    let curve = byKey.get(key);
    if (!curve) {
      curve = { scheme: scheme[i]!, pds: pds[i]!, points: [] };
      byKey.set(key, curve);
    }
    curve.points.push({ snrDb: snr[i]!, ber: ber[i]!, bits: bits[i]!, errors: errors[i]! });
  }
  for (const curve of byKey.values()) {
    curve.points.sort((a, b) => a.snrDb - b.snrDb);
  }
  return [...byKey.values()];
}

function curveLabel(curve: BerCurve): string {
  return curve.pds > 0 ? `${curve.scheme} (pds ${curve.pds}%)` : curve.scheme;
}

/** Pointwise minimum across the lower-bound curves, for the shading edge. */
function shadeLowerEdge(curves: BerCurve[]): BerPoint[] | null {
  const lower = curves.filter((c) => c.scheme === 'lower-bound');
  if (lower.length === 0) {
    return null;
  }
  const bySnr = new Map<number, BerPoint>();
  for (const curve of lower) {
    for (const p of curve.points) {
      const existing = bySnr.get(p.snrDb);
      if (!existing || (p.ber > 0 && p.ber < existing.ber)) {
        bySnr.set(p.snrDb, p);
      }
    }
  }
  return [...bySnr.values()].sort((a, b) => a.snrDb - b.snrDb);
}

export function renderBer(argv: string[]): string {
  const args = parseArgs(argv);
  if (args.positional.length < 2 || args.positional.length > 3) {
    throw new Error('usage: plot_ber <ber.csv> [fit.csv] <output.svg> [--manifest FILE]');
  }
  const berPath = args.positional[0]!;
  const fitPath = args.positional.length === 3 ? args.positional[1] : undefined;
  const output = args.positional[args.positional.length - 1]!;
  const spec: FigureSpec = { inputs: fitPath ? [berPath, fitPath] : [berPath], kind: 'ber', output, logY: true };

  const curves = loadBerCurves(berPath);
  const positive = curves.flatMap((c) => c.points.filter((p) => p.ber > 0).map((p) => p.ber));
  if (positive.length === 0) {
    throw new Error(`${berPath}: no positive BER values to plot`);
  }
  const snrs = curves.flatMap((c) => c.points.map((p) => p.snrDb));
  const yLo = 10 ** Math.floor(Math.log10(Math.min(...positive)));
  const yHi = 10 ** Math.ceil(Math.log10(Math.max(...positive)));
  const x = linearScale([Math.min(...snrs), Math.max(...snrs)], [MARGIN.left, WIDTH - MARGIN.right]);
  const y = logScale([yLo, yHi], [HEIGHT - MARGIN.bottom, MARGIN.top]);

  const parts: string[] = [];
  parts.push(shading(curves, x, y));

  const legend: string[] = [];
  curves.forEach((curve, index) => {
    const color = PALETTE[index % PALETTE.length]!;
    const pts = curve.points.filter((p) => p.ber > 0);
    if (pts.length === 0) {
      console.warn(`warning: curve "${curveLabel(curve)}" has no positive BER points; skipped`);
      return;
    }
    const line: Array<[number, number]> = pts.map((p) => [x(p.snrDb), y(p.ber)]);
    const analytic = curve.points.every((p) => p.bits === 0);
    const lineAttrs: Record<string, string | number> = { stroke: color, 'stroke-width': 1.5 };
    if (analytic) {
      lineAttrs['stroke-dasharray'] = '6 3';
    }
    parts.push(polyline(line, lineAttrs));
    if (!analytic) {
      for (const p of pts) {
        const hollow = p.errors < UNDERSAMPLED_ERRORS;
        parts.push(
          circle(x(p.snrDb), y(p.ber), 3.5, {
            stroke: color,
            fill: hollow ? 'none' : color,
            class: hollow ? 'point undersampled' : 'point',
          }),
        );
      }
    }
    const ly = MARGIN.top + 14 * legend.length;
    legend.push(
      polyline(
        [
          [WIDTH - MARGIN.right + 10, ly],
          [WIDTH - MARGIN.right + 34, ly],
        ],
        lineAttrs,
      ) + text(WIDTH - MARGIN.right + 40, ly + 3, curveLabel(curve), {}),
    );
  });
  parts.push(...legend);

  parts.push(axisBottom(x, HEIGHT - MARGIN.bottom, 'average received SNR (dB)'));
  parts.push(axisLeft(y, MARGIN.left, 'average BER'));
  parts.push(text(WIDTH / 2, 22, 'Average BER vs received SNR', { 'text-anchor': 'middle', 'font-size': 14 }));
  if (fitPath) {
    const note = readFitRows(fitPath)
      .map((r) => `pds ${r.pds}%: K=${r.K.toFixed(3)}, sI2=${r.sigmaISq.toExponential(2)}, sO2=${r.sigmaOSq.toFixed(3)}`)
      .join('  |  ');
    parts.push(text(WIDTH / 2, 38, `fitted model: ${note}`, { 'text-anchor': 'middle', 'font-size': 9, fill: '#555' }));
  }
  parts.push(text(MARGIN.left, HEIGHT - 10, footerText(spec.inputs, args.options.get('manifest')), { fill: '#555' }));

  writeFigure(spec, svgDocument(WIDTH, HEIGHT, parts));
  return output;
}

function shading(curves: BerCurve[], x: Scale, y: Scale): string {
  const reference =
    curves.find((c) => c.scheme === 'rayleigh-analytic') ?? curves.find((c) => c.scheme === 'narrowband-rayleigh-sim');
  const lowerEdge = shadeLowerEdge(curves);
  if (!reference || !lowerEdge) {
    const missing = !reference ? 'a narrowband reference' : 'the lower-bound scheme';
    console.warn(`warning: ${missing} is missing; skipping playing-area shading`);
    return '';
  }
  const upper = reference.points.filter((p) => p.ber > 0);
  const lower = lowerEdge.filter((p) => p.ber > 0);
  if (upper.length === 0 || lower.length === 0) {
    console.warn('warning: shading curves have no positive BER points; skipping playing-area shading');
    return '';
  }
  const ring: Array<[number, number]> = [
    ...upper.map((p): [number, number] => [x(p.snrDb), y(p.ber)]),
    ...lower.reverse().map((p): [number, number] => [x(p.snrDb), y(Math.max(p.ber, y.domain[0]))]),
  ];
  return polygon(ring, { fill: '#74a9cf', opacity: 0.3, class: 'playing-area' });
}

if (process.argv[1] && fileURLToPath(import.meta.url) === resolve(process.argv[1])) {
  runMain(renderBer);
}
