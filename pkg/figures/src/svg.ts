/** Minimal SVG scene helpers shared by the figure scripts. Output is a
 * standalone vector file; axes are drawn from scale objects that map
 * data coordinates to pixels.
 */

export interface Scale {
  (value: number): number;
  domain: [number, number];
  range: [number, number];
  ticks: () => number[];
  log: boolean;
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const scale = ((value: number) => r0 + ((value - d0) / span) * (r1 - r0)) as Scale;
  scale.domain = domain;
  scale.range = range;
  scale.log = false;
  scale.ticks = () => linearTicks(d0, d1);
  return scale;
}

/** Log10 scale; the domain must be strictly positive. Ticks at powers of ten. */
export function logScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  if (d0 <= 0 || d1 <= 0) {
    throw new Error(`log scale domain must be positive, got [${d0}, ${d1}]`);
  }
  const [r0, r1] = range;
  const l0 = Math.log10(d0);
  const l1 = Math.log10(d1);
  const span = l1 - l0 || 1;
  const scale = ((value: number) => r0 + ((Math.log10(value) - l0) / span) * (r1 - r0)) as Scale;
  scale.domain = domain;
  scale.range = range;
  scale.log = true;
  scale.ticks = () => {
    const ticks: number[] = [];
    for (let e = Math.ceil(l0 - 1e-9); e <= Math.floor(l1 + 1e-9); e++) {
      ticks.push(10 ** e);
    }
    return ticks;
  };
  return scale;
}

function linearTicks(lo: number, hi: number, count = 6): number[] {
  const span = hi - lo;
  if (!(span > 0)) {
    return [lo];
  }
  const step = niceStep(span / count);
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return ticks;
}

function niceStep(raw: number): number {
  const power = 10 ** Math.floor(Math.log10(raw));
  const unit = raw / power;
  if (unit <= 1) return power;
  if (unit <= 2) return 2 * power;
  if (unit <= 5) return 5 * power;
  return 10 * power;
}

export function esc(text: string): string {
  return text.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;').replace(/"/g, '&quot;');
}

const FMT = (v: number) => (Math.abs(v) < 1e-12 ? '0' : String(Number(v.toPrecision(6))));

export function tag(name: string, attrs: Record<string, string | number>, body = ''): string {
  const parts = Object.entries(attrs).map(([k, v]) => `${k}="${v}"`);
  const open = `<${name} ${parts.join(' ')}`;
  return body === '' ? `${open}/>` : `${open}>${body}</${name}>`;
}

export function group(transform: string, children: string[], cls = ''): string {
  const attrs: Record<string, string> = { transform };
  if (cls) {
    attrs.class = cls;
  }
  return tag('g', attrs, children.join(''));
}

export function text(x: number, y: number, content: string, attrs: Record<string, string | number> = {}): string {
  return tag('text', { x: FMT(x), y: FMT(y), 'font-size': 11, 'font-family': 'sans-serif', ...attrs }, esc(content));
}

export function polyline(points: Array<[number, number]>, attrs: Record<string, string | number>): string {
  const d = points.map(([x, y], i) => `${i === 0 ? 'M' : 'L'}${FMT(x)},${FMT(y)}`).join('');
  return tag('path', { d, fill: 'none', ...attrs });
}

export function polygon(points: Array<[number, number]>, attrs: Record<string, string | number>): string {
  const d = points.map(([x, y], i) => `${i === 0 ? 'M' : 'L'}${FMT(x)},${FMT(y)}`).join('') + 'Z';
  return tag('path', { d, ...attrs });
}

export function circle(cx: number, cy: number, r: number, attrs: Record<string, string | number>): string {
  return tag('circle', { cx: FMT(cx), cy: FMT(cy), r, ...attrs });
}

export function rect(x: number, y: number, w: number, h: number, attrs: Record<string, string | number>): string {
  return tag('rect', { x: FMT(x), y: FMT(y), width: FMT(w), height: FMT(h), ...attrs });
}

export function formatTick(value: number, log: boolean): string {
  if (log) {
    const e = Math.round(Math.log10(value));
    return `1e${e}`;
  }
  return String(Number(value.toPrecision(4)));
}

/** Horizontal axis along the bottom edge of the plot area. */
export function axisBottom(x: Scale, y0: number, label: string): string {
  const parts: string[] = [tag('line', { x1: x.range[0], x2: x.range[1], y1: y0, y2: y0, stroke: 'black' })];
  for (const t of x.ticks()) {
    const px = x(t);
    parts.push(tag('line', { x1: FMT(px), x2: FMT(px), y1: y0, y2: y0 + 4, stroke: 'black' }));
    parts.push(text(px, y0 + 16, formatTick(t, x.log), { 'text-anchor': 'middle' }));
  }
  const mid = (x.range[0] + x.range[1]) / 2;
  parts.push(text(mid, y0 + 32, label, { 'text-anchor': 'middle' }));
  return parts.join('');
}

/** Vertical axis along the left edge of the plot area. */
export function axisLeft(y: Scale, x0: number, label: string): string {
  const parts: string[] = [tag('line', { x1: x0, x2: x0, y1: y.range[0], y2: y.range[1], stroke: 'black' })];
  for (const t of y.ticks()) {
    const py = y(t);
    parts.push(tag('line', { x1: x0 - 4, x2: x0, y1: FMT(py), y2: FMT(py), stroke: 'black' }));
    parts.push(text(x0 - 6, py + 3, formatTick(t, y.log), { 'text-anchor': 'end' }));
  }
  const mid = (y.range[0] + y.range[1]) / 2;
  parts.push(text(12, mid, label, { 'text-anchor': 'middle', transform: `rotate(-90 12 ${FMT(mid)})` }));
  return parts.join('');
}

export function svgDocument(width: number, height: number, children: string[]): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}">` +
    `<rect x="0" y="0" width="${width}" height="${height}" fill="white"/>` +
    children.join('') +
    '</svg>\n'
  );
}

export const PALETTE = ['#1f77b4', '#d62728', '#2ca02c', '#9467bd', '#ff7f0e', '#8c564b', '#17becf'];

/** Two-stop-per-segment colormap from dark blue through green to yellow. */
export function heatColor(unit: number): string {
  const stops: Array<[number, [number, number, number]]> = [
    [0.0, [13, 8, 84]],
    [0.25, [84, 39, 143]],
    [0.5, [33, 113, 181]],
    [0.75, [65, 171, 93]],
    [1.0, [254, 227, 50]],
  ];
  const t = Math.min(1, Math.max(0, unit));
  for (let i = 1; i < stops.length; i++) {
    const [t1, c1] = stops[i]!;
    const [t0, c0] = stops[i - 1]!;
    if (t <= t1) {
      const f = (t - t0) / (t1 - t0);
      const mix = c0.map((v, k) => Math.round(v + f * (c1[k]! - v)));
      return `rgb(${mix[0]},${mix[1]},${mix[2]})`;
    }
  }
  return 'rgb(254,227,50)';
}
