/** DOM wiring for the workbench. Only this module touches `document`;
 * state transitions and rendering live in form.ts / view.ts. */

import { ApiClient, ApiError } from "./api.js";
import {
  FormState,
  buildRequirement,
  canSubmit,
  initForm,
  rowError,
  setActive,
  setIntervalBounds,
  setLabel,
  setMode,
  setNormalize,
  setNumeric,
} from "./form.js";
import type { RowState } from "./form.js";
import type { SelectionMode } from "./types.js";
import { errorView, escapeHtml, resultsView, retryBanner } from "./view.js";

export async function mount(root: HTMLElement, client: ApiClient): Promise<void> {
  let schema;
  try {
    schema = await client.schema();
  } catch (error) {
    root.innerHTML = retryBanner(`service unreachable (${describe(error)})`);
    root
      .querySelector<HTMLButtonElement>('[data-role="retry-button"]')!
      .addEventListener("click", () => void mount(root, client));
    return;
  }

  let state: FormState = initForm(schema.properties);
  let inFlight: AbortController | null = null;

  root.innerHTML = `
    <form data-role="requirement-form">
      <table class="form-table"><tbody>
        ${state.rows.map(rowHtml).join("")}
      </tbody></table>
      <div class="controls">
        <label><input type="radio" name="mode" value="oriented" checked> oriented</label>
        <label><input type="radio" name="mode" value="paper-min"> paper-min</label>
        <label><input type="checkbox" data-role="normalize"> normalize</label>
        <button type="submit" data-role="run" disabled>Run comparison</button>
      </div>
    </form>
    <section data-role="results" class="results"></section>
  `;

  const form = root.querySelector<HTMLFormElement>('[data-role="requirement-form"]')!;
  const results = root.querySelector<HTMLElement>('[data-role="results"]')!;
  const runButton = root.querySelector<HTMLButtonElement>('[data-role="run"]')!;

  function refreshControls(): void {
    runButton.disabled = !canSubmit(state);
    for (const row of state.rows) {
      const name = row.property.name;
      const errorrSpan = form.querySelector<HTMLElement>(
        `[data-role="row-error"][data-prop="${cssEscape(name)}"]`,
      );
      if (errorrSpan) {
        errorrSpan.textContent = row.active ? (rowError(row) ?? "") : "";
      }
      for (const input of form.querySelectorAll<HTMLInputElement | HTMLSelectElement>(
        `[data-prop="${cssEscape(name)}"][data-field]`,
      )) {
        input.disabled = !row.active;
      }
    }
  }

  form.addEventListener("change", (event) => {
    const target = event.target as HTMLInputElement | HTMLSelectElement;
    const name = target.getAttribute("data-prop");
    if (target.getAttribute("data-role") === "activate" && name) {
      state = setActive(state, name, (target as HTMLInputElement).checked);
    } else if (target.getAttribute("data-field") === "label" && name) {
      state = setLabel(state, name, target.value);
    } else if (target.getAttribute("name") === "mode") {
      state = setMode(state, target.value as SelectionMode);
    } else if (target.getAttribute("data-role") === "normalize") {
      state = setNormalize(state, (target as HTMLInputElement).checked);
    }
    refreshControls();
  });

  form.addEventListener("input", (event) => {
    const target = event.target as HTMLInputElement;
    const name = target.getAttribute("data-prop");
    const field = target.getAttribute("data-field");
    if (!name || !field) return;
    if (field === "numeric") {
      state = setNumeric(state, name, target.value);
    } else if (field === "lo" || field === "hi") {
      const lo = fieldValue(form, name, "lo");
      const hi = fieldValue(form, name, "hi");
      state = setIntervalBounds(state, name, lo, hi);
    }
    refreshControls();
  });

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    void runQuery();
  });

  async function runQuery(): Promise<void> {
    if (!canSubmit(state)) return;
    inFlight?.abort(); // later submissions cancel earlier ones
    const controller = new AbortController();
    inFlight = controller;
    const requirement = buildRequirement(state);
    try {
      await client.classify(requirement, controller.signal);
      const comparison = await client.compare(
        {
          requirement,
          mode: state.mode,
          normalize: state.normalize,
        },
        controller.signal,
      );
      if (controller.signal.aborted) return;
      results.innerHTML = resultsView(comparison);
    } catch (error) {
      if (controller.signal.aborted) return; // superseded, drop silently
      if (error instanceof ApiError) {
        results.innerHTML = errorView(error.detail); // form state is untouched
      } else {
        results.innerHTML = errorView(`service unreachable (${describe(error)})`);
      }
    }
  }
}

function rowHtml(row: RowState): string {
  const name = row.property.name;
  const attr = escapeHtml(name);
  let widget: string;
  if (row.property.kind === "numeric") {
    widget = `<input type="number" step="any" data-field="numeric" data-prop="${attr}" disabled>`;
  } else if (row.property.kind === "interval") {
    widget =
      `<input type="number" step="any" data-field="lo" data-prop="${attr}" placeholder="lo" disabled>` +
      ` .. <input type="number" step="any" data-field="hi" data-prop="${attr}" placeholder="hi" disabled>`;
  } else {
    const options = (row.property.ordinal_labels ?? [])
      .map((label) => `<option value="${escapeHtml(label)}">${escapeHtml(label)}</option>`)
      .join("");
    widget = `<select data-field="label" data-prop="${attr}" disabled>${options}</select>`;
  }
  return (
    `<tr data-row="${attr}">` +
    `<td><label><input type="checkbox" data-role="activate" data-prop="${attr}"> ${attr}</label></td>` +
    `<td class="unit">${escapeHtml(row.property.unit)}</td>` +
    `<td>${widget} <span class="row-error" data-role="row-error" data-prop="${attr}"></span></td>` +
    "</tr>"
  );
}

function fieldValue(form: HTMLFormElement, name: string, field: "lo" | "hi"): string {
  const input = form.querySelector<HTMLInputElement>(
    `[data-prop="${cssEscape(name)}"][data-field="${field}"]`,
  );
  return input?.value ?? "";
}

function cssEscape(text: string): string {
  return text.replace(/["\\]/g, "\\$&");
}

function describe(error: unknown): string {
  return error instanceof Error ? error.message : String(error);
}
