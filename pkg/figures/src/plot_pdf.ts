import { resolve } from 'path';
import { fileURLToPath } from 'url';

import { numericColumn, readCsv, requireRows } from './csv.js';
import { FigureSpec, footerText, parseArgs, runMain, writeFigure } from './figure.js';
import { FitRow, readFitRows } from './fit.js';
import { ghPdfGrid } from './gh.js';
import { histogramDensity } from './stats.js';
import { axisBottom, axisLeft, group, linearScale, polyline, rect, svgDocument, text } from './svg.js';

const PANEL_W = 300;
const PANEL_H = 240;
const MARGIN = { left: 56, right: 12, top: 36, bottom: 52 };
const OVERLAY_GRID = 1000;

interface Panel {
  pds: number;
  samples: number[];
  fit?: FitRow;
}

export function loadPanels(pdfPath: string, fitPath: string): Panel[] {
  const table = requireRows(readCsv(pdfPath));
  const pds = numericColumn(table, 'pds');
  const reG = numericColumn(table, 're_g');
  const byPds = new Map<number, number[]>();
  for (let i = 0; i < pds.length; i++) {
    let samples = byPds.get(pds[i]!);
    if (!samples) {
      samples = [];
      byPds.set(pds[i]!, samples);
    }
    samples.push(reG[i]!);
  }
  const fits = new Map(readFitRows(fitPath).map((row) => [row.pds, row]));
  return [...byPds.entries()]
    .sort((a, b) => a[0] - b[0])
    .map(([p, samples]) => ({ pds: p, samples, fit: fits.get(p) }));
}

function renderPanel(panel: Panel): string[] {
  const hist = histogramDensity(panel.samples);
  const lo = hist.edges[0]!;
  const hi = hist.edges[hist.edges.length - 1]!;
  let yMax = Math.max(...hist.density);
  let overlay: { x: number[]; y: number[] } | null = null;
  if (panel.fit) {
    overlay = ghPdfGrid(panel.fit, lo, hi, OVERLAY_GRID);
    yMax = Math.max(yMax, ...overlay.y);
  } else {
    console.warn(`warning: no fitted parameters for pds ${panel.pds}%; histogram drawn without overlay`);
  }
  const x = linearScale([lo, hi], [MARGIN.left, MARGIN.left + PANEL_W]);
  const y = linearScale([0, yMax * 1.05], [MARGIN.top + PANEL_H, MARGIN.top]);

  const parts: string[] = [];
  for (let i = 0; i < hist.density.length; i++) {
    const x0 = x(hist.edges[i]!);
    const x1 = x(hist.edges[i + 1]!);
    const top = y(hist.density[i]!);
    parts.push(rect(x0, top, x1 - x0, y(0) - top, { fill: '#9ecae1', stroke: '#6baed6', 'stroke-width': 0.5 }));
  }
  if (overlay) {
    const pts: Array<[number, number]> = overlay.x.map((xi, i) => [x(xi), y(overlay!.y[i]!)]);
    parts.push(polyline(pts, { stroke: '#d62728', 'stroke-width': 1.5, class: 'fit-overlay' }));
  }
  parts.push(axisBottom(x, y(0), 're(g)'));
  parts.push(axisLeft(y, MARGIN.left, 'density'));
  parts.push(
    text(MARGIN.left + PANEL_W / 2, MARGIN.top - 10, `pds ${panel.pds}%`, {
      'text-anchor': 'middle',
      'font-size': 12,
    }),
  );
  return parts;
}

export function renderPdf(argv: string[]): string {
  const args = parseArgs(argv);
  if (args.positional.length !== 3) {
    throw new Error('usage: plot_pdf <pdf.csv> <fit.csv> <output.svg> [--manifest FILE]');
  }
  const [pdfPath, fitPath, output] = args.positional as [string, string, string];
  const spec: FigureSpec = { inputs: [pdfPath, fitPath], kind: 'pdf', output, logY: false };

  const panels = loadPanels(pdfPath, fitPath);
  const cols = Math.min(panels.length, 2);
  const rows = Math.ceil(panels.length / cols);
  const cellW = MARGIN.left + PANEL_W + MARGIN.right;
  const cellH = MARGIN.top + PANEL_H + MARGIN.bottom;
  const width = cols * cellW;
  const height = rows * cellH + 28;

  const parts: string[] = [];
  panels.forEach((panel, index) => {
    const cx = (index % cols) * cellW;
    const cy = Math.floor(index / cols) * cellH;
    parts.push(group(`translate(${cx} ${cy})`, renderPanel(panel), 'panel'));
  });
  parts.push(text(MARGIN.left, height - 10, footerText(spec.inputs, args.options.get('manifest')), { fill: '#555' }));

  writeFigure(spec, svgDocument(width, height, parts));
  return output;
}

if (process.argv[1] && fileURLToPath(import.meta.url) === resolve(process.argv[1])) {
  runMain(renderPdf);
}
