import { resolve } from 'path';
import { fileURLToPath } from 'url';

import { FigureSpec, footerText, parseArgs, runMain, writeFigure } from './figure.js';
import { readFitRows } from './fit.js';
import { ghComplexPdf } from './gh.js';
import { axisBottom, axisLeft, heatColor, linearScale, rect, svgDocument, text } from './svg.js';

const PANEL = 360;
const MARGIN = { left: 64, right: 24, top: 44, bottom: 72 };
const CELLS = 101;
const EXTENT_SIGMAS = 3.0;

export function renderComplexPdf(argv: string[]): string {
  const args = parseArgs(argv);
  if (args.positional.length !== 2) {
    throw new Error('usage: plot_complex_pdf <fit.csv> <output.svg> [--pds P] [--manifest FILE]');
  }
  const [input, output] = args.positional as [string, string];
  const spec: FigureSpec = { inputs: [input], kind: 'complex-pdf', output, logY: false };

  const rows = readFitRows(input);
  const wanted = args.options.get('pds');
  const row = wanted === undefined ? rows[0]! : rows.find((r) => r.pds === Number(wanted));
  if (!row) {
    throw new Error(`${input}: no fitted row for pds ${wanted}% (have: ${rows.map((r) => r.pds).join(', ')})`);
  }

  const extent = EXTENT_SIGMAS * Math.sqrt(row.sigmaOSq);
  const values: number[] = [];
  let vMax = 0;
  for (let j = 0; j < CELLS; j++) {
    for (let i = 0; i < CELLS; i++) {
      const gx = -extent + (2 * extent * i) / (CELLS - 1);
      const gy = -extent + (2 * extent * j) / (CELLS - 1);
      const v = ghComplexPdf(row, gx, gy);
      values.push(v);
      vMax = Math.max(vMax, v);
    }
  }

  const x = linearScale([-extent, extent], [MARGIN.left, MARGIN.left + PANEL]);
  const y = linearScale([-extent, extent], [MARGIN.top + PANEL, MARGIN.top]);
  const cell = PANEL / CELLS;
  const parts: string[] = [];
  for (let j = 0; j < CELLS; j++) {
    for (let i = 0; i < CELLS; i++) {
      const gx = -extent + (2 * extent * i) / (CELLS - 1);
      const gy = -extent + (2 * extent * j) / (CELLS - 1);
      const v = values[j * CELLS + i]!;
      parts.push(
        rect(x(gx) - cell / 2, y(gy) - cell / 2, cell + 0.5, cell + 0.5, { fill: heatColor(v / vMax), stroke: 'none' }),
      );
    }
  }
  parts.push(axisBottom(x, MARGIN.top + PANEL, 're(g)'));
  parts.push(axisLeft(y, MARGIN.left, 'im(g)'));
  parts.push(
    text(MARGIN.left + PANEL / 2, 22, `Joint density of the synchronized gain, pds ${row.pds}%`, {
      'text-anchor': 'middle',
      'font-size': 14,
    }),
  );
  const height = MARGIN.top + PANEL + MARGIN.bottom;
  parts.push(text(MARGIN.left, height - 10, footerText(spec.inputs, args.options.get('manifest')), { fill: '#555' }));

  writeFigure(spec, svgDocument(MARGIN.left + PANEL + MARGIN.right, height, parts));
  return output;
}

if (process.argv[1] && fileURLToPath(import.meta.url) === resolve(process.argv[1])) {
  runMain(renderComplexPdf);
}
