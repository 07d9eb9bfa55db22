/** Requirement form state and validation, kept free of DOM concerns so the
 * what-if loop is a pure state -> payload transformation. */

import type {
  RequirementEntry,
  SchemaProperty,
  SelectionMode,
} from "./types.js";

export interface RowState {
  property: SchemaProperty;
  /** Requirements are partial: rows opt in individually. */
  active: boolean;
  numeric: string; // raw text for numeric kind
  lo: string; // interval bounds, raw text
  hi: string;
  label: string; // ordinal selection
}

export interface FormState {
  rows: RowState[];
  mode: SelectionMode;
  normalize: boolean;
}

export function initForm(properties: SchemaProperty[]): FormState {
  const rows = properties.map((property) => ({
    property,
    active: false,
    numeric: "",
    lo: "",
    hi: "",
    label: property.ordinal_labels?.[0] ?? "",
  }));
  return { rows, mode: "oriented", normalize: false };
}

function parseDecimal(text: string): number | null {
  const trimmed = text.trim();
  if (trimmed === "") return null;
  const value = Number(trimmed);
  return Number.isFinite(value) ? value : null;
}

/** Human-readable problem with a row's entry, or null when it is valid. */
export function rowError(row: RowState): string | null {
  const { property } = row;
  if (property.kind === "numeric") {
    return parseDecimal(row.numeric) === null ? "enter a number" : null;
  }
  if (property.kind === "interval") {
    const lo = parseDecimal(row.lo);
    const hi = parseDecimal(row.hi);
    if (lo === null || hi === null) return "enter both bounds";
    return lo <= hi ? null : "lower bound exceeds upper bound";
  }
  const labels = property.ordinal_labels ?? [];
  return labels.includes(row.label) ? null : "pick a label from the scale";
}

/** Submission gate: at least one active row and no active row in error. */
export function canSubmit(state: FormState): boolean {
  const active = state.rows.filter((row) => row.active);
  return active.length > 0 && active.every((row) => rowError(row) === null);
}

/** Active rows as ordered requirement entries (form order = schema order). */
export function buildRequirement(state: FormState): RequirementEntry[] {
  return state.rows
    .filter((row) => row.active)
    .map((row) => ({ property: row.property.name, value: rowValue(row) }));
}

function rowValue(row: RowState) {
  if (row.property.kind === "numeric") return Number(row.numeric.trim());
  if (row.property.kind === "interval") {
    return { lo: Number(row.lo.trim()), hi: Number(row.hi.trim()) };
  }
  return row.label;
}

export function setActive(state: FormState, name: string, active: boolean): FormState {
  return updateRow(state, name, (row) => ({ ...row, active }));
}

export function setNumeric(state: FormState, name: string, numeric: string): FormState {
  return updateRow(state, name, (row) => ({ ...row, numeric }));
}

export function setIntervalBounds(
  state: FormState,
  name: string,
  lo: string,
  hi: string,
): FormState {
  return updateRow(state, name, (row) => ({ ...row, lo, hi }));
}

export function setLabel(state: FormState, name: string, label: string): FormState {
  return updateRow(state, name, (row) => ({ ...row, label }));
}

export function setMode(state: FormState, mode: SelectionMode): FormState {
  return { ...state, mode };
}

export function setNormalize(state: FormState, normalize: boolean): FormState {
  return { ...state, normalize };
}

function updateRow(
  state: FormState,
  name: string,
  update: (row: RowState) => RowState,
): FormState {
  return {
    ...state,
    rows: state.rows.map((row) => (row.property.name === name ? update(row) : row)),
  };
}
