import { readFileSync } from 'fs';
import { gunzipSync } from 'zlib';

export interface Table {
  header: string[];
  rows: string[][];
  /** Label used in diagnostics, normally the file path. */
  label: string;
}

/** Parse simple comma-separated text (no quoting; the simulator never quotes). */
export function parseCsv(text: string, label = '<string>'): Table {
  const lines = text.split('\n').filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new Error(`${label}: empty CSV`);
  }
  const header = lines[0]!.split(',');
  const rows = lines.slice(1).map((line) => line.split(','));
  return { header, rows, label };
}

/** Read a CSV file; `.gz` paths are decompressed transparently. */
export function readCsv(path: string): Table {
  const raw = readFileSync(path);
  const text = path.endsWith('.gz') ? gunzipSync(raw).toString('utf8') : raw.toString('utf8');
  return parseCsv(text, path);
}

export function columnIndex(table: Table, name: string): number {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new Error(`${table.label}: missing column "${name}" (have: ${table.header.join(', ')})`);
  }
  return idx;
}

export function stringColumn(table: Table, name: string): string[] {
  const idx = columnIndex(table, name);
  return table.rows.map((row) => row[idx] ?? '');
}

export function numericColumn(table: Table, name: string): number[] {
  const idx = columnIndex(table, name);
  return table.rows.map((row, i) => {
    const value = Number(row[idx]);
    if (Number.isNaN(value)) {
      throw new Error(`${table.label}: row ${i + 1}: non-numeric value "${row[idx]}" in column "${name}"`);
    }
    return value;
  });
}

export function requireRows(table: Table): Table {
  if (table.rows.length === 0) {
    throw new Error(`${table.label}: no data rows`);
  }
  return table;
}
