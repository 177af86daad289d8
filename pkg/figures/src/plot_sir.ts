import { resolve } from 'path';
import { fileURLToPath } from 'url';

import { numericColumn, readCsv, requireRows } from './csv.js';
import { FigureSpec, footerText, parseArgs, runMain, writeFigure } from './figure.js';
import { axisBottom, axisLeft, circle, linearScale, polyline, svgDocument, text } from './svg.js';

const WIDTH = 520;
const HEIGHT = 400;
const MARGIN = { left: 64, right: 24, top: 44, bottom: 72 };

export function renderSir(argv: string[]): string {
  const args = parseArgs(argv);
  if (args.positional.length !== 2) {
    throw new Error('usage: plot_sir <sir.csv> <output.svg> [--manifest FILE]');
  }
  const [input, output] = args.positional as [string, string];
  const spec: FigureSpec = { inputs: [input], kind: 'sir', output, logY: false };

  const table = requireRows(readCsv(input));
  const pds = numericColumn(table, 'pds');
  const sir = numericColumn(table, 'mean_sir_db');
  const order = pds.map((_, i) => i).sort((a, b) => pds[a]! - pds[b]!);

  const x = linearScale([0, Math.max(...pds) * 1.05], [MARGIN.left, WIDTH - MARGIN.right]);
  const yLo = Math.min(...sir);
  const yHi = Math.max(...sir);
  const pad = (yHi - yLo) * 0.08 || 1;
  const y = linearScale([yLo - pad, yHi + pad], [HEIGHT - MARGIN.bottom, MARGIN.top]);

  const pts: Array<[number, number]> = order.map((i) => [x(pds[i]!), y(sir[i]!)]);
  const parts: string[] = [polyline(pts, { stroke: '#1f77b4', 'stroke-width': 1.5 })];
  for (const [px, py] of pts) {
    parts.push(circle(px, py, 3.5, { fill: '#1f77b4', stroke: 'none' }));
  }
  parts.push(axisBottom(x, HEIGHT - MARGIN.bottom, 'percentage delay spread (%)'));
  parts.push(axisLeft(y, MARGIN.left, 'mean SIR (dB)'));
  parts.push(
    text(WIDTH / 2, 22, 'Ensemble-mean SIR vs delay spread', { 'text-anchor': 'middle', 'font-size': 14 }),
  );
  parts.push(text(MARGIN.left, HEIGHT - 10, footerText(spec.inputs, args.options.get('manifest')), { fill: '#555' }));

  writeFigure(spec, svgDocument(WIDTH, HEIGHT, parts));
  return output;
}

if (process.argv[1] && fileURLToPath(import.meta.url) === resolve(process.argv[1])) {
  runMain(renderSir);
}
