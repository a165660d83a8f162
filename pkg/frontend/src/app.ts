// Application wiring: one LabSession store, pure view functions for the
// panels, delegated DOM listeners for the interactions. Inspector payloads
// are fetched per node through LatestOnly gates so a reply that lost the
// race never overwrites a newer one.

import { escapeHtml, fmt, pct } from './format';
import { LabClient, LatestOnly, ProtocolError } from './protocol';
import { LabSession } from './session';
import { BlinkDriver } from './views/blink';
import { renderBlob } from './views/blob';
import { glyphFor, renderBoard } from './views/board';
import { renderKet } from './views/ket';
import { renderOperator } from './views/operator';
import { renderTree } from './views/tree';
import type {
  AmplitudeFormat,
  Basis,
  ChshDocument,
  ElementInfo,
  FixtureInfo,
  SampleRecords,
  SetupElement,
  ViewMode,
} from './types';

type Tab = 'ket' | 'operator' | 'entanglement' | 'blink' | 'detections' | 'sampling';

const TABS: Tab[] = ['ket', 'operator', 'entanglement', 'blink', 'detections', 'sampling'];
const MODES: ViewMode[] = ['high-intensity', 'wave', 'detection'];
const BASES: Basis[] = ['HV', 'DA', 'LR'];
const FORMATS: AmplitudeFormat[] = ['cartesian', 'polar', 'polar-tau', 'color'];
const WAVE_INTERVAL_MS = 500; // 2 steps per second

function apiBase(): string {
  const override = new URLSearchParams(location.search).get('api');
  return override ? override.replace(/\/$/, '') : '';
}

const client = new LabClient(apiBase());
const session = new LabSession(client);

// app-local state that is not session state
let fixtures: FixtureInfo[] = [];
let elements: ElementInfo[] = [];
let activeTab: Tab = 'ket';
let selectedElement: string | null = null;
let armedKind: string | null = null;
let waveTimer: ReturnType<typeof setInterval> | null = null;
let wavePath: number[] = [];
let waveIndex = 0;
let blinkDriver: BlinkDriver | null = null;
let blinkSeed = 'glimpse';
let sampleHtml = '';

const inspectorGate = new LatestOnly();

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

// -- layout -------------------------------------------------------------------

function buildLayout(): void {
  el('app').innerHTML = `
    <header>
      <span class="brand">photon lab</span>
      <select id="fixtures"></select>
      <nav id="modes"></nav>
      <span id="status"></span>
    </header>
    <main>
      <section class="panel" id="left">
        <div id="toolbox"></div>
        <div id="board"></div>
        <div id="wave-controls" class="hidden">
          <button data-wave="toggle">▶</button>
          <button data-wave="step">⏭</button>
          <span id="wave-where"></span>
        </div>
      </section>
      <section class="panel" id="middle">
        <h2>branches</h2>
        <div id="tree"></div>
      </section>
      <section class="panel" id="right">
        <nav id="tabs"></nav>
        <div id="view-toggles"></div>
        <div id="inspector"></div>
      </section>
    </main>`;
}

function renderModes(): void {
  el('modes').innerHTML = MODES.map(
    (m) =>
      `<button data-mode="${m}" class="${m === session.viewMode ? 'on' : ''}">${m}</button>`,
  ).join('');
}

function renderTabs(): void {
  el('tabs').innerHTML = TABS.map(
    (t) => `<button data-tab="${t}" class="${t === activeTab ? 'on' : ''}">${t}</button>`,
  ).join('');
  const wantsBasis = activeTab === 'ket' || activeTab === 'operator' || activeTab === 'blink';
  const wantsFormat = activeTab === 'ket';
  el('view-toggles').innerHTML =
    (wantsBasis
      ? BASES.map(
          (b) =>
            `<button data-basis="${b}" class="${b === session.basis ? 'on' : ''}">${b}</button>`,
        ).join('')
      : '') +
    (wantsFormat
      ? '<span class="gap"></span>' +
        FORMATS.map(
          (f) =>
            `<button data-format="${f}" class="${f === session.format ? 'on' : ''}">${f}</button>`,
        ).join('')
      : '');
}

function renderToolbox(): void {
  el('toolbox').innerHTML = elements
    .map((e) => {
      const cls = e.kind === armedKind ? 'tool armed' : 'tool';
      return `<button class="${cls}" data-kind="${escapeHtml(e.kind)}" title="${escapeHtml(
        e.kind,
      )}">${escapeHtml(glyphFor(e.kind))}</button>`;
    })
    .join('');
}

function renderFixtures(): void {
  const options = fixtures
    .map((f) => `<option value="${escapeHtml(f.name)}">${escapeHtml(f.title)}</option>`)
    .join('');
  (el('fixtures') as HTMLSelectElement).innerHTML =
    `<option value="">(pick an experiment)</option>${options}`;
}

function renderStatus(): void {
  const status = el('status');
  if (session.lastError.length) {
    status.className = 'error';
    status.textContent = session.lastError.join(' | ');
    return;
  }
  status.className = '';
  const d = session.detections;
  if (!d) {
    status.textContent = '';
    return;
  }
  status.textContent =
    `explored ${pct(d.exploredProbability)} · truncated ${pct(d.truncatedProbability)} · ` +
    `defect ${fmt(d.conservationDefect)}`;
}

function renderBoardPanel(): void {
  el('board').innerHTML = session.board
    ? renderBoard(session.board, selectedElement)
    : '<p class="hint">pick an experiment above, or place elements on an empty board</p>';
  el('board').classList.toggle('placing', armedKind !== null);
}

function renderTreePanel(): void {
  el('tree').innerHTML = session.tree
    ? renderTree(session.tree, session.selectedNode)
    : '<p class="hint">no branches yet</p>';
}

// -- inspector tabs -----------------------------------------------------------

function stopBlink(): void {
  if (blinkDriver) {
    blinkDriver.stop();
    blinkDriver = null;
  }
}

function findElement(name: string | null): SetupElement | undefined {
  return session.board?.elements.find((e) => e.name === name);
}

async function renderInspector(): Promise<void> {
  stopBlink();
  const pane = el('inspector');
  const sid = session.session;
  if (!sid || !session.tree) {
    pane.innerHTML = '<p class="hint">open an experiment first</p>';
    return;
  }
  const node = session.selectedNode;

  if (activeTab === 'detections') {
    const d = session.detections;
    if (!d) {
      pane.innerHTML = '<p class="hint">no detection summary</p>';
      return;
    }
    const rows = Object.entries(d.detectors)
      .map(
        ([name, p]) =>
          `<tr title="p ${p}"><td>${escapeHtml(name)}</td>` +
          `<td><span class="bar" style="width:${Math.max(0, Math.min(100, p * 100))}%"></span>` +
          `<span class="num">${escapeHtml(pct(p))}</span></td></tr>`,
      )
      .join('');
    pane.innerHTML =
      `<table class="ket"><caption>time-integrated click probability</caption>` +
      `<tbody>${rows}</tbody></table>` +
      `<p class="fine">${d.nodeCount} nodes · ${d.leafCount} leaves · ` +
      `conservation defect ${fmt(d.conservationDefect)}</p>`;
    return;
  }

  if (activeTab === 'operator') {
    const target = findElement(selectedElement);
    if (!target) {
      pane.innerHTML = '<p class="hint">click a board element to inspect its operator</p>';
      return;
    }
    const outcome = await inspectorGate.run(() =>
      client.operator({
        kind: target.kind,
        rotation: target.rotation,
        params: target.params,
        basis: session.basis,
      }),
    );
    if (outcome.stale) return;
    pane.innerHTML =
      `<div class="op-name">${escapeHtml(target.name)}</div>` + renderOperator(outcome.value);
    return;
  }

  if (activeTab === 'sampling') {
    pane.innerHTML =
      `<div class="sample-controls">` +
      `<label>seed <input id="sample-seed" value="lab"></label>` +
      `<label>runs <input id="sample-runs" value="200" size="6"></label>` +
      `<button id="sample-go">sample</button>` +
      `<button id="chsh-go">chsh</button></div>` +
      `<div id="sample-out">${sampleHtml}</div>`;
    return;
  }

  // remaining tabs inspect the selected node
  pane.innerHTML = '<p class="hint">…</p>';
  try {
    if (activeTab === 'ket') {
      const outcome = await inspectorGate.run(() =>
        client.nodeState(sid, node, session.basis, session.format),
      );
      if (!outcome.stale) pane.innerHTML = renderKet(outcome.value);
    } else if (activeTab === 'entanglement') {
      const outcome = await inspectorGate.run(() => client.nodeEntanglement(sid, node));
      if (!outcome.stale) pane.innerHTML = renderBlob(outcome.value);
    } else if (activeTab === 'blink') {
      const outcome = await inspectorGate.run(() =>
        client.nodeBlink(sid, node, blinkSeed, 8, session.basis),
      );
      if (outcome.stale) return;
      pane.innerHTML =
        `<div class="sample-controls"><label>seed <input id="blink-seed" ` +
        `value="${escapeHtml(blinkSeed)}"></label></div><div id="blink-stage"></div>`;
      const stage = el('blink-stage');
      blinkDriver = new BlinkDriver(outcome.value.shots, (html) => {
        stage.innerHTML = html;
      });
      blinkDriver.start();
    }
  } catch (err) {
    if (err instanceof ProtocolError) {
      pane.innerHTML = `<p class="error">${escapeHtml(err.message)}</p>`;
    } else {
      throw err;
    }
  }
}

// -- sampling actions -----------------------------------------------------------

function countsTable(log: SampleRecords): string {
  const totals = new Map<string, number>();
  for (const record of log.records) {
    for (const [name, v] of Object.entries(record.latches)) {
      totals.set(name, (totals.get(name) ?? 0) + (v ? 1 : 0));
    }
    for (const [name, v] of Object.entries(record.outputs)) {
      totals.set(`${name} (out)`, (totals.get(`${name} (out)`) ?? 0) + v);
    }
  }
  const n = log.records.length || 1;
  const rows = [...totals.entries()]
    .sort(([a], [b]) => a.localeCompare(b))
    .map(
      ([name, count]) =>
        `<tr><td>${escapeHtml(name)}</td><td>${count}</td>` +
        `<td>${escapeHtml(pct(count / n))}</td></tr>`,
    )
    .join('');
  const exploded = log.records.filter((r) => r.exploded).length;
  return (
    `<table class="ket"><caption>${log.runs} runs · seed ${escapeHtml(log.seed)}</caption>` +
    `<thead><tr><th>counter</th><th>clicks</th><th>rate</th></tr></thead>` +
    `<tbody>${rows}</tbody></table>` +
    (exploded ? `<p class="fine">✸ exploded in ${exploded} runs</p>` : '')
  );
}

function chshTable(doc: ChshDocument): string {
  const rows = Object.entries(doc.E)
    .map(
      ([pair, value]) =>
        `<tr title="E ${value} · weight ${doc.weights[pair]}">` +
        `<td>E(${pair})</td><td>${escapeHtml(fmt(value))}</td></tr>`,
    )
    .join('');
  return (
    `<table class="ket"><caption title="S ${doc.S}">S = ${escapeHtml(fmt(doc.S))}</caption>` +
    `<tbody>${rows}</tbody></table>`
  );
}

async function runSample(): Promise<void> {
  const sid = session.session;
  if (!sid) return;
  const seed = (el('sample-seed') as HTMLInputElement).value || 'lab';
  const runs = Number((el('sample-runs') as HTMLInputElement).value) || 200;
  el('sample-out').innerHTML = '<p class="hint">sampling…</p>';
  try {
    const log = await client.sample(sid, { seed, runs });
    sampleHtml = countsTable(log);
  } catch (err) {
    sampleHtml = `<p class="error">${escapeHtml(
      err instanceof ProtocolError ? err.message : String(err),
    )}</p>`;
  }
  el('sample-out').innerHTML = sampleHtml;
}

async function runChsh(): Promise<void> {
  const sid = session.session;
  if (!sid) return;
  try {
    sampleHtml = chshTable(await client.chsh(sid));
  } catch (err) {
    sampleHtml = `<p class="error">${escapeHtml(
      err instanceof ProtocolError ? err.message : String(err),
    )}</p>`;
  }
  el('sample-out').innerHTML = sampleHtml;
}

// -- wave playback ---------------------------------------------------------------

// Follow the fattest branch from the root, one node per tick.
function rebuildWavePath(): void {
  wavePath = [];
  const tree = session.tree;
  if (!tree) return;
  let id: number | undefined = tree.root;
  while (id !== undefined) {
    wavePath.push(id);
    const kids: number[] = session.node(id)?.children ?? [];
    let best: number | undefined;
    for (const kid of kids) {
      const p = session.node(kid)?.probability ?? -1;
      if (best === undefined || p > (session.node(best)?.probability ?? -1)) best = kid;
    }
    id = best;
  }
  waveIndex = Math.max(0, wavePath.indexOf(session.selectedNode));
}

function waveTick(): void {
  if (!wavePath.length) rebuildWavePath();
  if (waveIndex + 1 >= wavePath.length) {
    stopWave();
    return;
  }
  waveIndex += 1;
  const next = wavePath[waveIndex];
  if (next !== undefined) session.selectNode(next);
}

function startWave(): void {
  if (waveTimer !== null) return;
  rebuildWavePath();
  if (waveIndex + 1 >= wavePath.length) waveIndex = 0;
  waveTimer = setInterval(waveTick, WAVE_INTERVAL_MS);
  renderWaveControls();
}

function stopWave(): void {
  if (waveTimer !== null) {
    clearInterval(waveTimer);
    waveTimer = null;
  }
  renderWaveControls();
}

function renderWaveControls(): void {
  el('wave-controls').classList.toggle('hidden', session.viewMode !== 'wave');
  const toggle = document.querySelector<HTMLButtonElement>('[data-wave="toggle"]');
  if (toggle) toggle.textContent = waveTimer === null ? '▶' : '⏸';
  const where = el('wave-where');
  const node = session.selected();
  where.textContent = node ? `step ${node.step} · node #${node.id}` : '';
}

// -- event wiring -----------------------------------------------------------------

function cellAt(target: EventTarget | null): HTMLElement | null {
  return target instanceof Element ? target.closest<HTMLElement>('.cell') : null;
}

function wireEvents(): void {
  (el('fixtures') as HTMLSelectElement).addEventListener('change', (ev) => {
    const name = (ev.target as HTMLSelectElement).value;
    if (!name) return;
    selectedElement = null;
    armedKind = null;
    sampleHtml = '';
    void session.openFixture(name).catch((err: unknown) => {
      session.lastError = [err instanceof Error ? err.message : String(err)];
      renderStatus();
    });
  });

  el('modes').addEventListener('click', (ev) => {
    const btn = (ev.target as Element).closest<HTMLElement>('[data-mode]');
    if (!btn) return;
    const mode = btn.dataset['mode'] as ViewMode;
    session.setViewMode(mode);
    if (mode === 'wave') startWave();
    else stopWave();
    if (mode === 'detection') {
      activeTab = 'sampling';
      renderTabs();
      void renderInspector();
    }
  });

  el('wave-controls').addEventListener('click', (ev) => {
    const btn = (ev.target as Element).closest<HTMLElement>('[data-wave]');
    if (!btn) return;
    if (btn.dataset['wave'] === 'toggle') {
      if (waveTimer === null) startWave();
      else stopWave();
    } else {
      stopWave();
      waveTick();
    }
  });

  el('tabs').addEventListener('click', (ev) => {
    const btn = (ev.target as Element).closest<HTMLElement>('[data-tab]');
    if (!btn) return;
    activeTab = btn.dataset['tab'] as Tab;
    renderTabs();
    void renderInspector();
  });

  el('view-toggles').addEventListener('click', (ev) => {
    const target = ev.target as Element;
    const basisBtn = target.closest<HTMLElement>('[data-basis]');
    if (basisBtn) session.setBasis(basisBtn.dataset['basis'] as Basis);
    const formatBtn = target.closest<HTMLElement>('[data-format]');
    if (formatBtn) session.setFormat(formatBtn.dataset['format'] as AmplitudeFormat);
  });

  el('toolbox').addEventListener('click', (ev) => {
    const btn = (ev.target as Element).closest<HTMLElement>('[data-kind]');
    if (!btn) return;
    armedKind = armedKind === btn.dataset['kind'] ? null : btn.dataset['kind'] ?? null;
    renderToolbox();
    renderBoardPanel();
  });

  const board = el('board');
  board.addEventListener('click', (ev) => {
    const cell = cellAt(ev.target);
    if (!cell) return;
    const x = Number(cell.dataset['x']);
    const y = Number(cell.dataset['y']);
    if (armedKind && !cell.dataset['name']) {
      const kind = armedKind;
      armedKind = null;
      renderToolbox();
      void session.placeElement(kind, x, y);
      return;
    }
    selectedElement = cell.dataset['name'] ?? null;
    renderBoardPanel();
    if (activeTab === 'operator') void renderInspector();
  });
  board.addEventListener('dblclick', (ev) => {
    const cell = cellAt(ev.target);
    const name = cell?.dataset['name'];
    if (name) void session.rotateElement(name);
  });
  board.addEventListener('dragstart', (ev) => {
    const name = cellAt(ev.target)?.dataset['name'];
    if (name && ev instanceof DragEvent) ev.dataTransfer?.setData('text/element', name);
  });
  board.addEventListener('dragover', (ev) => ev.preventDefault());
  board.addEventListener('drop', (ev) => {
    if (!(ev instanceof DragEvent)) return;
    ev.preventDefault();
    const cell = cellAt(ev.target);
    const name = ev.dataTransfer?.getData('text/element');
    if (!cell || !name || cell.dataset['name']) return;
    void session.moveElement(name, Number(cell.dataset['x']), Number(cell.dataset['y']));
  });

  document.addEventListener('keydown', (ev) => {
    if (ev.key === 'Delete' && selectedElement) {
      const name = selectedElement;
      selectedElement = null;
      void session.removeElement(name);
    }
  });

  el('tree').addEventListener('click', (ev) => {
    const row = (ev.target as Element).closest<HTMLElement>('[data-node]');
    if (row) session.selectNode(Number(row.dataset['node']));
  });

  el('inspector').addEventListener('click', (ev) => {
    const id = (ev.target as Element).id;
    if (id === 'sample-go') void runSample();
    if (id === 'chsh-go') void runChsh();
  });
  el('inspector').addEventListener('change', (ev) => {
    if ((ev.target as Element).id === 'blink-seed') {
      blinkSeed = (ev.target as HTMLInputElement).value || 'glimpse';
      void renderInspector();
    }
  });
}

// -- boot --------------------------------------------------------------------------

function onStoreChange(): void {
  if (!findElement(selectedElement)) selectedElement = null;
  renderModes();
  renderStatus();
  renderBoardPanel();
  renderTreePanel();
  renderWaveControls();
  void renderInspector();
}

async function boot(): Promise<void> {
  buildLayout();
  renderModes();
  renderTabs();
  renderBoardPanel();
  renderTreePanel();
  wireEvents();
  session.subscribe(onStoreChange);
  try {
    [fixtures, elements] = await Promise.all([client.fixtures(), client.elements()]);
  } catch (err) {
    el('status').className = 'error';
    el('status').textContent = `server unreachable: ${
      err instanceof Error ? err.message : String(err)
    }`;
    return;
  }
  renderFixtures();
  renderToolbox();
}

void boot();
