// Payload shapes of the photonlab serve protocol (format "photonlab-serve",
// version 1). These mirror the server's documented JSON; nothing here is
// computed client side.

export type Basis = 'HV' | 'DA' | 'LR';
export type AmplitudeFormat = 'cartesian' | 'polar' | 'polar-tau' | 'color';
export type ViewMode = 'high-intensity' | 'wave' | 'detection';

export interface Meta {
  format: string;
  version: number;
  fixtureCount: number;
  sessionCount: number;
}

export interface FixtureInfo {
  name: string;
  title: string;
  notes: string;
}

export interface ElementInfo {
  kind: string;
  params: string[];
  isSource: boolean;
  isMeasurement: boolean;
  isLogic: boolean;
}

// -- setup documents (format "photonlab-setup") ------------------------------

export interface GridSize {
  width: number;
  height: number;
}

export interface SetupElement {
  name: string;
  kind: string;
  x: number;
  y: number;
  rotation: number;
  params?: Record<string, unknown>;
  altParams?: Record<string, unknown>;
}

export interface Wire {
  from: string;
  to: string;
}

export interface SetupDocument {
  format: string;
  version: number;
  title?: string;
  notes?: string;
  board: GridSize;
  symmetrize?: boolean;
  elements: SetupElement[];
  wires: Wire[];
}

// -- sessions ----------------------------------------------------------------

export interface SimConfig {
  maxSteps?: number;
  minBranchProbability?: number;
  maxNodes?: number;
}

export interface TruncationRecord {
  reason: string;
  probability: number;
  node?: number;
  [extra: string]: unknown;
}

export interface Detections {
  detectors: Record<string, number>;
  exploredProbability: number;
  truncatedProbability: number;
  conservationDefect: number;
  nodeCount: number;
  leafCount: number;
  truncations: TruncationRecord[];
}

export interface SessionDescription {
  session: string;
  setup: SetupDocument;
  config: Required<SimConfig>;
  detections: Detections;
}

export interface SessionSummary {
  session: string;
  title: string;
  nodeCount: number;
  exploredProbability: number;
}

// -- tree documents (format "photonlab-tree") --------------------------------

export interface TreeEvent {
  type: string;
  element?: string;
  particle?: number;
  x?: number;
  y?: number;
  direction?: string;
  polarization?: string;
  value?: number;
}

export interface DimInfo {
  name: string;
  particle?: number | null;
  labels: string[];
}

export interface SparseState {
  dims: DimInfo[];
  entries: [number, number, number][];
}

export interface PhotonInfo {
  particle: number;
  source: string;
  wavelength: number | null;
}

export interface TreeNode {
  id: number;
  parent: number | null;
  step: number;
  probability: number;
  terminal: boolean;
  truncated: number;
  photons: PhotonInfo[];
  classical: Record<string, number>;
  events: TreeEvent[];
  children: number[];
  state?: SparseState;
}

export interface TreeStats {
  exploredProbability: number;
  truncatedProbability: number;
  nodeCount: number;
  maxStateEntries: number;
}

export interface TreeDocument {
  format: string;
  version: number;
  root: number;
  board: SetupDocument;
  config: Required<SimConfig>;
  stats: TreeStats;
  truncations: TruncationRecord[];
  nodes: TreeNode[];
}

// -- state views --------------------------------------------------------------

export interface DisplayCartesian {
  re: number;
  im: number;
}

export interface DisplayPolar {
  r: number;
  phi: number;
}

export interface DisplayTau {
  r: number;
  turns: number;
}

export interface DisplayColor {
  r: number;
  hue: number;
}

export type DisplayValue = DisplayCartesian | DisplayPolar | DisplayTau | DisplayColor;

export interface StateComponent {
  label: string;
  labels: string[];
  re: number;
  im: number;
  probability: number;
  display: DisplayValue;
}

export interface NodeStateDocument {
  node: number;
  step: number;
  probability: number;
  photons: PhotonInfo[];
  basis: Basis;
  format: AmplitudeFormat;
  normSquared: number;
  components: StateComponent[];
}

export interface ParticleEntropy {
  particle: number;
  purity: number;
  entropy: number;
}

export interface BlobAnchor {
  particle: number;
  x: number;
  y: number;
  entropy: number;
  width: number;
}

export interface EntanglementDocument {
  node: number;
  step: number;
  particles: ParticleEntropy[];
  graph: {
    anchors: BlobAnchor[];
    center: { x: number; y: number };
  };
}

export interface BlinkSnapshot {
  particle: number;
  weight: number;
  components: StateComponent[];
}

export interface BlinkDocument {
  node: number;
  seed: string;
  basis: Basis;
  shots: BlinkSnapshot[][];
}

// -- operators -----------------------------------------------------------------

export interface OperatorEntry {
  out: string[];
  in: string[];
  re: number;
  im: number;
}

export interface SourceAmplitude {
  polarizations: number[];
  re: number;
  im: number;
}

export interface OperatorDocument {
  kind: string;
  rotation: number;
  params: Record<string, unknown>;
  basis?: Basis;
  type: 'unitary' | 'pairGate' | 'measurement' | 'source' | 'classical' | 'logic';
  entries?: OperatorEntry[];
  weight?: number;
  destructive?: boolean;
  explosive?: boolean;
  projector?: OperatorEntry[];
  directions?: number[];
  amplitudes?: SourceAmplitude[];
}

// -- analyses ------------------------------------------------------------------

export interface ChshDocument {
  E: Record<string, number>;
  S: number;
  weights: Record<string, number>;
  standardErrors?: Record<string, number>;
  sStandardError?: number;
}

export interface SampleRecord {
  run: number;
  seed: string;
  inputs: Record<string, number>;
  latches: Record<string, number>;
  steps: Record<string, number>;
  outputs: Record<string, number>;
  final_step: number;
  exploded: boolean;
}

export interface SampleRecords {
  seed: string;
  runs: number;
  records: SampleRecord[];
}

export interface ApiErrorBody {
  error: string;
  details?: string[];
}
