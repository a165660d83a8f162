// Client for the photonlab serve protocol. One method per endpoint, all
// returning the server's JSON untouched. See docs/serve-protocol.md in the
// simulator package for the wire format.

import type {
  AmplitudeFormat,
  Basis,
  BlinkDocument,
  ChshDocument,
  ElementInfo,
  EntanglementDocument,
  FixtureInfo,
  Meta,
  NodeStateDocument,
  OperatorDocument,
  SampleRecords,
  SessionDescription,
  SessionSummary,
  SetupDocument,
  SimConfig,
  TreeDocument,
} from './types';

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ProtocolError extends Error {
  readonly status: number;
  readonly details: string[];

  constructor(status: number, message: string, details: string[] = []) {
    super(message);
    this.name = 'ProtocolError';
    this.status = status;
    this.details = details;
  }
}

function query(params: Record<string, string | number | undefined>): string {
  const q = new URLSearchParams();
  for (const [key, value] of Object.entries(params)) {
    if (value !== undefined) q.set(key, String(value));
  }
  const s = q.toString();
  return s ? `?${s}` : '';
}

export class LabClient {
  constructor(
    private readonly base: string = '',
    private readonly fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.body = JSON.stringify(body);
      init.headers = { 'Content-Type': 'application/json' };
    }
    const res = await this.fetchImpl(this.base + path, init);
    const text = await res.text();
    if (!res.ok) {
      let message = `${res.status}`;
      let details: string[] = [];
      try {
        const parsed = JSON.parse(text) as { error?: string; details?: string[] };
        if (parsed.error) message = parsed.error;
        if (Array.isArray(parsed.details)) details = parsed.details.map(String);
      } catch {
        if (text) message = text;
      }
      throw new ProtocolError(res.status, message, details);
    }
    const type = res.headers.get('content-type') ?? '';
    if (type.startsWith('text/csv')) return text as T;
    return JSON.parse(text) as T;
  }

  meta(): Promise<Meta> {
    return this.request('GET', '/api/meta');
  }

  fixtures(): Promise<FixtureInfo[]> {
    return this.request('GET', '/api/fixtures');
  }

  fixture(name: string): Promise<SetupDocument> {
    return this.request('GET', `/api/fixtures/${encodeURIComponent(name)}`);
  }

  elements(): Promise<ElementInfo[]> {
    return this.request('GET', '/api/elements');
  }

  operator(body: {
    kind: string;
    rotation?: number;
    params?: Record<string, unknown>;
    basis?: Basis;
  }): Promise<OperatorDocument> {
    return this.request('POST', '/api/operator', body);
  }

  createSession(body: {
    fixture?: string;
    setup?: SetupDocument;
    config?: SimConfig;
  }): Promise<SessionDescription> {
    return this.request('POST', '/api/sessions', body);
  }

  sessions(): Promise<SessionSummary[]> {
    return this.request('GET', '/api/sessions');
  }

  session(id: string): Promise<SessionDescription> {
    return this.request('GET', `/api/sessions/${id}`);
  }

  replaceSetup(id: string, setup: SetupDocument): Promise<SessionDescription> {
    return this.request('PUT', `/api/sessions/${id}/setup`, setup);
  }

  deleteSession(id: string): Promise<{ deleted: string }> {
    return this.request('DELETE', `/api/sessions/${id}`);
  }

  tree(id: string, withStates = false): Promise<TreeDocument> {
    return this.request('GET', `/api/sessions/${id}/tree${query({ states: withStates ? 1 : 0 })}`);
  }

  nodeState(
    id: string,
    node: number,
    basis: Basis = 'HV',
    format: AmplitudeFormat = 'cartesian',
  ): Promise<NodeStateDocument> {
    return this.request('GET', `/api/sessions/${id}/nodes/${node}/state${query({ basis, format })}`);
  }

  nodeEntanglement(id: string, node: number): Promise<EntanglementDocument> {
    return this.request('GET', `/api/sessions/${id}/nodes/${node}/entanglement`);
  }

  nodeBlink(
    id: string,
    node: number,
    seed: string,
    shots: number,
    basis: Basis = 'HV',
  ): Promise<BlinkDocument> {
    return this.request('GET', `/api/sessions/${id}/nodes/${node}/blink${query({ seed, shots, basis })}`);
  }

  chsh(id: string): Promise<ChshDocument> {
    return this.request('GET', `/api/sessions/${id}/chsh`);
  }

  sample(id: string, body: { seed: string; runs: number }): Promise<SampleRecords> {
    return this.request('POST', `/api/sessions/${id}/sample`, { ...body, format: 'records' });
  }

  sampleCsv(id: string, body: { seed: string; runs: number }): Promise<string> {
    return this.request('POST', `/api/sessions/${id}/sample`, { ...body, format: 'csv' });
  }
}

// Sequence gate for racing requests on one logical channel. Each run gets a
// ticket; a response whose ticket is no longer newest is reported stale so
// callers drop it instead of overwriting fresher data.
export type Sequenced<T> = { stale: true } | { stale: false; value: T };

export class LatestOnly {
  private seq = 0;

  async run<T>(task: () => Promise<T>): Promise<Sequenced<T>> {
    const ticket = ++this.seq;
    const value = await task();
    if (ticket !== this.seq) return { stale: true };
    return { stale: false, value };
  }
}
