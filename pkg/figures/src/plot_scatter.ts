import { resolve } from 'path';
import { fileURLToPath } from 'url';

import { Table, numericColumn, readCsv, requireRows } from './csv.js';
import { FigureSpec, footerText, parseArgs, runMain, writeFigure } from './figure.js';
import { axisBottom, axisLeft, circle, group, linearScale, svgDocument, text } from './svg.js';

const PANEL = 300;
const MARGIN = { left: 56, right: 16, top: 40, bottom: 56 };
const MAX_POINTS = 20_000;

interface Cloud {
  title: string;
  re: number[];
  im: number[];
}

/** Paired clouds from scatter.csv (h and g) or a single cloud from pdf.csv. */
export function loadClouds(path: string): Cloud[] {
  const table = requireRows(readCsv(path));
  if (table.header.includes('re_h')) {
    return [
      { title: 'narrowband h', re: numericColumn(table, 're_h'), im: numericColumn(table, 'im_h') },
      { title: 'synchronized g', re: numericColumn(table, 're_g'), im: numericColumn(table, 'im_g') },
    ];
  }
  return [{ title: 'synchronized g', re: numericColumn(table, 're_g'), im: numericColumn(table, 'im_g') }];
}

export function firstPds(table: Table): number {
  return numericColumn(table, 'pds')[0]!;
}

function renderCloud(cloud: Cloud): string[] {
  // One symmetric range on both axes keeps the aspect ratio equal.
  let radius = 0;
  for (let i = 0; i < cloud.re.length; i++) {
    radius = Math.max(radius, Math.abs(cloud.re[i]!), Math.abs(cloud.im[i]!));
  }
  const x = linearScale([-radius, radius], [MARGIN.left, MARGIN.left + PANEL]);
  const y = linearScale([-radius, radius], [MARGIN.top + PANEL, MARGIN.top]);
  const parts: string[] = [];
  const step = Math.max(1, Math.ceil(cloud.re.length / MAX_POINTS));
  for (let i = 0; i < cloud.re.length; i += step) {
    parts.push(circle(x(cloud.re[i]!), y(cloud.im[i]!), 1, { fill: '#1f77b4', 'fill-opacity': 0.25, stroke: 'none' }));
  }
  parts.push(axisBottom(x, MARGIN.top + PANEL, 're'));
  parts.push(axisLeft(y, MARGIN.left, 'im'));
  parts.push(text(MARGIN.left + PANEL / 2, MARGIN.top - 12, cloud.title, { 'text-anchor': 'middle', 'font-size': 12 }));
  return parts;
}

export function renderScatter(argv: string[]): string {
  const args = parseArgs(argv);
  if (args.positional.length !== 2) {
    throw new Error('usage: plot_scatter <scatter.csv|pdf.csv> <output.svg> [--manifest FILE]');
  }
  const [input, output] = args.positional as [string, string];
  const spec: FigureSpec = { inputs: [input], kind: 'scatter', output, logY: false };

  const clouds = loadClouds(input);
  const pds = firstPds(requireRows(readCsv(input)));
  const cellW = MARGIN.left + PANEL + MARGIN.right;
  const height = MARGIN.top + PANEL + MARGIN.bottom + 24;
  const parts: string[] = [];
  clouds.forEach((cloud, index) => {
    parts.push(group(`translate(${index * cellW} 0)`, renderCloud(cloud), 'panel'));
  });
  parts.push(
    text(clouds.length * cellW / 2, 14, `Complex gain scatter, pds ${pds}%`, {
      'text-anchor': 'middle',
      'font-size': 14,
    }),
  );
  parts.push(text(MARGIN.left, height - 8, footerText(spec.inputs, args.options.get('manifest')), { fill: '#555' }));

  writeFigure(spec, svgDocument(clouds.length * cellW, height, parts));
  return output;
}

if (process.argv[1] && fileURLToPath(import.meta.url) === resolve(process.argv[1])) {
  runMain(renderScatter);
}
