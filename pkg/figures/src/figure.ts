import { readFileSync, writeFileSync, existsSync } from 'fs';
import { basename, dirname, join } from 'path';

/** Description of one figure to render. */
export interface FigureSpec {
  inputs: string[];
  kind: 'ber' | 'pdf' | 'scatter' | 'sir' | 'complex-pdf';
  output: string;
  xRange?: [number, number];
  yRange?: [number, number];
  logY: boolean;
}

export interface CliArgs {
  positional: string[];
  options: Map<string, string>;
}

/** Parse `positional... --key value` argument lists (no combined short flags). */
export function parseArgs(argv: string[]): CliArgs {
  const positional: string[] = [];
  const options = new Map<string, string>();
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i]!;
    if (arg.startsWith('--')) {
      const value = argv[i + 1];
      if (value === undefined) {
        throw new Error(`option ${arg} expects a value`);
      }
      options.set(arg.slice(2), value);
      i++;
    } else {
      positional.push(arg);
    }
  }
  return { positional, options };
}

/** The master seed recorded by the run that produced an input file.
 *
 * Looks for an explicit manifest path first, then for a sibling
 * `<kind>_manifest.json` next to each input (a `fit.csv` produced by the
 * pdf command is covered by `pdf_manifest.json`). Returns null when no
 * manifest is found.
 */
export function discoverSeed(inputs: string[], explicitManifest?: string): { seed: number; path: string } | null {
  const candidates: string[] = [];
  if (explicitManifest) {
    candidates.push(explicitManifest);
  }
  for (const input of inputs) {
    const stem = basename(input).replace(/\.csv(\.gz)?$/, '');
    candidates.push(join(dirname(input), `${stem}_manifest.json`));
    if (stem === 'fit') {
      candidates.push(join(dirname(input), 'pdf_manifest.json'));
    }
  }
  for (const path of candidates) {
    if (!existsSync(path)) {
      if (path === explicitManifest) {
        throw new Error(`manifest not found: ${path}`);
      }
      continue;
    }
    const manifest = JSON.parse(readFileSync(path, 'utf8')) as {
      master_seed?: number;
      config?: { master_seed?: number };
    };
    const seed = manifest.master_seed ?? manifest.config?.master_seed;
    if (seed !== undefined) {
      return { seed, path };
    }
  }
  return null;
}

export function footerText(inputs: string[], explicitManifest?: string): string {
  const found = discoverSeed(inputs, explicitManifest);
  if (found === null) {
    console.warn(`warning: no run manifest found next to ${inputs.join(', ')}; seed unknown`);
    return 'seed unknown (no run manifest found)';
  }
  return `seed ${found.seed} (${basename(found.path)})`;
}

export function writeFigure(spec: FigureSpec, svg: string): void {
  writeFileSync(spec.output, svg);
}

/** Shared entry-point wrapper: render, report, exit nonzero on failure. */
export function runMain(render: (argv: string[]) => string): void {
  try {
    const output = render(process.argv.slice(2));
    console.log(`wrote ${output}`);
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : String(err)}`);
    process.exitCode = 1;
  }
}
