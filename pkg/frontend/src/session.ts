// UI session state: one server session, its board document, the explored
// tree, and the current view settings. Every edit goes through the serve
// protocol before it is committed locally, so the board shown is always one
// the server accepted; rejected edits surface the server's diagnostics and
// change nothing. Responses overtaken by a newer edit are discarded.

import { LabClient, LatestOnly, ProtocolError } from './protocol';
import type {
  AmplitudeFormat,
  Basis,
  Detections,
  SetupDocument,
  SetupElement,
  TreeDocument,
  TreeNode,
  ViewMode,
} from './types';

export interface EditResult {
  ok: boolean;
  stale: boolean;
  messages: string[];
}

const ACCEPTED: EditResult = { ok: true, stale: false, messages: [] };
const SUPERSEDED: EditResult = { ok: false, stale: true, messages: [] };

export class LabSession {
  board: SetupDocument | null = null;
  session: string | null = null;
  tree: TreeDocument | null = null;
  detections: Detections | null = null;
  selectedNode = 0;
  viewMode: ViewMode = 'high-intensity';
  basis: Basis = 'HV';
  format: AmplitudeFormat = 'cartesian';
  clock = 0;
  lastError: string[] = [];

  private readonly edits = new LatestOnly();
  private readonly listeners = new Set<() => void>();

  constructor(readonly client: LabClient) {}

  subscribe(listener: () => void): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) listener();
  }

  node(id: number): TreeNode | undefined {
    return this.tree?.nodes.find((n) => n.id === id);
  }

  selected(): TreeNode | undefined {
    return this.node(this.selectedNode);
  }

  async openFixture(name: string): Promise<void> {
    await this.open({ fixture: name });
  }

  async openSetup(setup: SetupDocument): Promise<void> {
    await this.open({ setup });
  }

  private async open(body: { fixture?: string; setup?: SetupDocument }): Promise<void> {
    if (this.session) {
      await this.client.deleteSession(this.session).catch(() => undefined);
      this.session = null;
    }
    const desc = await this.client.createSession(body);
    this.session = desc.session;
    this.board = desc.setup;
    this.detections = desc.detections;
    this.tree = await this.client.tree(desc.session, false);
    this.selectedNode = this.tree.root;
    this.clock = 0;
    this.lastError = [];
    this.emit();
  }

  // Node selection is a pure view change: the board and tree stay as they
  // are, inspectors re-fetch their payloads for the new node.
  selectNode(id: number): void {
    if (id === this.selectedNode) return;
    this.selectedNode = id;
    this.emit();
  }

  setViewMode(mode: ViewMode): void {
    this.viewMode = mode;
    this.emit();
  }

  setBasis(basis: Basis): void {
    this.basis = basis;
    this.emit();
  }

  setFormat(format: AmplitudeFormat): void {
    this.format = format;
    this.emit();
  }

  // Apply `mutate` to a copy of the board and offer it to the server. Only
  // an accepted, still-newest response replaces local state.
  async commitEdit(mutate: (draft: SetupDocument) => void): Promise<EditResult> {
    if (!this.board || !this.session) {
      return { ok: false, stale: false, messages: ['no open session'] };
    }
    const sid = this.session;
    const draft = structuredClone(this.board);
    mutate(draft);
    try {
      const outcome = await this.edits.run(async () => {
        const desc = await this.client.replaceSetup(sid, draft);
        const tree = await this.client.tree(sid, false);
        return { desc, tree };
      });
      if (outcome.stale) return SUPERSEDED;
      this.board = outcome.value.desc.setup;
      this.detections = outcome.value.desc.detections;
      this.tree = outcome.value.tree;
      if (!this.node(this.selectedNode)) this.selectedNode = outcome.value.tree.root;
      this.lastError = [];
      this.emit();
      return ACCEPTED;
    } catch (err) {
      if (err instanceof ProtocolError) {
        const messages = err.details.length ? err.details : [err.message];
        this.lastError = messages;
        this.emit();
        return { ok: false, stale: false, messages };
      }
      throw err;
    }
  }

  // -- board edit verbs (document manipulation only; the server judges them) --

  placeElement(kind: string, x: number, y: number): Promise<EditResult> {
    return this.commitEdit((draft) => {
      draft.elements.push({ name: freshName(draft, kind), kind, x, y, rotation: 0 });
    });
  }

  moveElement(name: string, x: number, y: number): Promise<EditResult> {
    return this.commitEdit((draft) => {
      const el = mustFind(draft, name);
      el.x = x;
      el.y = y;
    });
  }

  rotateElement(name: string): Promise<EditResult> {
    return this.commitEdit((draft) => {
      const el = mustFind(draft, name);
      el.rotation = (el.rotation + 1) % 8;
    });
  }

  removeElement(name: string): Promise<EditResult> {
    return this.commitEdit((draft) => {
      draft.elements = draft.elements.filter((el) => el.name !== name);
      draft.wires = draft.wires.filter((w) => w.from !== name && w.to !== name);
    });
  }

  setElementParams(
    name: string,
    params: Record<string, unknown>,
    altParams?: Record<string, unknown>,
  ): Promise<EditResult> {
    return this.commitEdit((draft) => {
      const el = mustFind(draft, name);
      if (Object.keys(params).length) el.params = params;
      else delete el.params;
      if (altParams && Object.keys(altParams).length) el.altParams = altParams;
      else delete el.altParams;
    });
  }
}

function mustFind(draft: SetupDocument, name: string): SetupElement {
  const el = draft.elements.find((e) => e.name === name);
  if (!el) throw new Error(`no element named ${name}`);
  return el;
}

function freshName(draft: SetupDocument, kind: string): string {
  const stem = kind
    .replace(/([a-z0-9])([A-Z])/g, '$1_$2')
    .toLowerCase();
  const taken = new Set(draft.elements.map((e) => e.name));
  if (!taken.has(stem)) return stem;
  for (let i = 2; ; i++) {
    const candidate = `${stem}${i}`;
    if (!taken.has(candidate)) return candidate;
  }
}
