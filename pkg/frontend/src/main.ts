/** DOM wiring for the mutation explorer. */

import { ApiClient, ApiError } from "./api.js";
import { renderQuiver } from "./render.js";
import { Session } from "./session.js";
import type { VerifyReport } from "./types.js";

const API_BASE = (window as unknown as { QPMUT_API?: string }).QPMUT_API ?? "";

const api = new ApiClient(API_BASE);
const session = new Session(api);

const el = (id: string) => document.getElementById(id)!;
const selectedVertices = new Set<string>();
let busy = false;

function setStatus(text: string, isError = false): void {
  const node = el("status");
  node.textContent = text;
  node.className = isError ? "status error" : "status";
}

function describeError(err: unknown): string {
  if (err instanceof ApiError) {
    const details = err.details ? ` ${JSON.stringify(err.details)}` : "";
    return `[${err.code}] ${err.message}${details}`;
  }
  return String(err);
}

function drawCurrent(): void {
  if (session.tree.current === null) return;
  const doc = session.document();
  const analysis = session.analysis();
  el("canvas").innerHTML = renderQuiver(doc, session.positions(), {
    selected: selectedVertices,
    disabled: session.disabledVertices(),
  });
  for (const g of el("canvas").querySelectorAll("g.vertex")) {
    g.addEventListener("click", () => {
      const v = (g as SVGGElement).dataset.vertex!;
      if (selectedVertices.has(v)) selectedVertices.delete(v);
      else selectedVertices.add(v);
      drawCurrent();
    });
  }
  const b = session.badges();
  el("badges").innerHTML = [
    `<span class="badge ${b.selfinjective ? "good" : "bad"}">` +
      `${b.selfinjective ? "selfinjective" : "not selfinjective"}</span>`,
    b.dimension !== null ? `<span class="badge">dim ${b.dimension}</span>` : "",
    b.nakayama ? `<span class="badge">&sigma; = ${b.nakayama}</span>` : "",
  ].join(" ");
  const orbitBox = el("orbits");
  orbitBox.innerHTML = "";
  for (const orbit of analysis.orbits) {
    const btn = document.createElement("button");
    btn.textContent = `orbit {${orbit.vertices.join(",")}}`;
    btn.disabled = !orbit.mutable || busy;
    btn.title = orbit.violations.join("; ");
    btn.addEventListener("click", () => mutateAt(orbit.vertices));
    orbitBox.appendChild(btn);
  }
  const tree = el("historyTree");
  tree.innerHTML = "";
  for (const { node, depth } of session.tree.walk()) {
    const li = document.createElement("div");
    li.className = "hnode" + (node.id === session.tree.current ? " current" : "");
    li.style.paddingLeft = `${depth * 18}px`;
    const label = node.vertices ? `mutate {${node.vertices.join(",")}}` : "root";
    const verified = session.report(node.parentId ?? "");
    li.textContent = `${label} (${node.id})` +
      (verified && node.parentId ? "" : "");
    li.addEventListener("click", () => {
      session.branchTo(node.id);
      selectedVertices.clear();
      drawCurrent();
    });
    tree.appendChild(li);
  }
  (el("undoBtn") as HTMLButtonElement).disabled = !session.tree.canUndo();
}

async function mutateAt(vertices: string[]): Promise<void> {
  if (busy) return;
  busy = true;
  setStatus(`mutating at {${vertices.join(",")}} ...`);
  try {
    await session.mutateAt(vertices);
    selectedVertices.clear();
    setStatus("mutation confirmed");
  } catch (err) {
    setStatus(describeError(err), true);
  } finally {
    busy = false;
    drawCurrent();
  }
}

function renderReport(report: VerifyReport): void {
  const ok = (b: boolean | null) =>
    b === null ? "?" : b ? "<span class='good'>yes</span>" : "<span class='bad'>no</span>";
  const exactOk = report.exactness.every(
    (c) => c.complex && c.middle_exact && c.image_is_radical !== false,
  );
  el("report").innerHTML = `
    <table>
      <tr><td>isomorphism verdict</td><td>${ok(report.iso_verdict)}</td></tr>
      <tr><td>dim End / dim Jacobian</td><td>${report.dim_end} / ${report.dim_jacobian_mutated}</td></tr>
      <tr><td>relations vanish</td><td>${ok(report.relations_ok)}</td></tr>
      <tr><td>surjective</td><td>${ok(report.surjective)}</td></tr>
      <tr><td>silting</td><td>${ok(report.silting)}</td></tr>
      <tr><td>tilting (Hom / &sigma;)</td><td>${ok(report.tilting_by_hom)} / ${ok(report.tilting_by_sigma)}</td></tr>
      <tr><td>exactness certificates</td><td>${ok(exactOk)} (${report.exactness.length})</td></tr>
    </table>`;
}

async function init(): Promise<void> {
  const picker = el("fixturePicker") as HTMLSelectElement;
  const { names } = await api.fixtures();
  for (const n of names) {
    const opt = document.createElement("option");
    opt.value = n;
    opt.textContent = n;
    picker.appendChild(opt);
  }
  el("loadBtn").addEventListener("click", async () => {
    setStatus(`loading ${picker.value} ...`);
    try {
      await session.loadFixture(picker.value);
      selectedVertices.clear();
      setStatus(`loaded ${picker.value}`);
    } catch (err) {
      setStatus(describeError(err), true);
    }
    drawCurrent();
  });
  el("uploadInput").addEventListener("change", async (ev) => {
    const file = (ev.target as HTMLInputElement).files?.[0];
    if (!file) return;
    try {
      await session.upload(JSON.parse(await file.text()));
      selectedVertices.clear();
      setStatus(`uploaded ${file.name}`);
    } catch (err) {
      setStatus(describeError(err), true);
    }
    drawCurrent();
  });
  el("mutateBtn").addEventListener("click", () => {
    mutateAt([...selectedVertices]);
  });
  el("undoBtn").addEventListener("click", () => {
    session.undo();
    selectedVertices.clear();
    drawCurrent();
  });
  el("verifyBtn").addEventListener("click", async () => {
    if (selectedVertices.size === 0) {
      setStatus("select vertices (or use an orbit button) first", true);
      return;
    }
    setStatus("verifying ...");
    try {
      const report = await session.verifyAt([...selectedVertices]);
      renderReport(report);
      setStatus("verification finished");
    } catch (err) {
      setStatus(describeError(err), true);
    }
  });
  el("exportBtn").addEventListener("click", () => {
    const text = session.exportText();
    const blob = new Blob([text], { type: "application/json" });
    const a = document.createElement("a");
    a.href = URL.createObjectURL(blob);
    a.download = `${session.currentId}.qp.json`;
    a.click();
    URL.revokeObjectURL(a.href);
  });
  setStatus("pick a fixture or upload a document");
}

init().catch((err) => setStatus(describeError(err), true));
