// Payload shapes of the studio HTTP API.  The server is the source of
// truth for all of these; the UI never invents tree state of its own.

export type StepKind = "root" | "comment" | "generated";

export interface Step {
  id: string;
  label: string;
  kind: StepKind;
  enabled: boolean;
  /** Owning interaction id, null for comments and roots. */
  interaction: string | null;
  /** Mask line that generated the step, null for comments and roots. */
  slot: number | null;
  code: string[];
  info: string[];
  children: Step[];
}

export interface Goal {
  name: string;
  root: Step;
}

export interface TreeSnapshot {
  goals: Goal[];
  head: number;
}

export interface ComponentSummary {
  id: string;
  name: string;
  domain: string;
}

export interface ComponentIndex {
  libraryId: string;
  targetProfile: string;
  domains: string[];
  components: ComponentSummary[];
}

export type ControlKind = "text" | "number" | "checkbox" | "choice";

export interface ControlSpec {
  name: string;
  kind: ControlKind;
  label: string;
  default: string;
  options: string[];
}

export interface ComponentPage {
  id: string;
  role: string;
  controls: ControlSpec[];
}

export interface ComponentDetail {
  id: string;
  name: string;
  domain: string;
  pages: ComponentPage[];
}

export interface InteractionDetail {
  interactionId: string;
  componentId: string;
  anchorStepId: string;
  values: Record<string, string>;
  stepIds: string[];
}

export interface InteractionResult {
  interactionId: string;
  stepIds: string[];
  /** Steps minted by a modify; absent on first submit. */
  freshIds?: string[];
  head: number;
}

export interface TreeOpResult {
  resultIds: string[];
  head: number;
}

export interface SearchMatch {
  id: string;
  label: string;
}

export interface EmittedFile {
  path: string;
  text: string;
  /** 1-based inclusive line range per contributing step. */
  spans: Record<string, [number, number]>;
}

export interface TimelineFrame {
  index: number;
  kind: string;
  caption: string;
  /** Step to highlight once the frame applies. */
  focus: string | null;
}

export interface TimelineInfo {
  length: number;
  head: number;
  events: TimelineFrame[];
}

export interface MovieFrame extends TimelineFrame {
  /** Full tree snapshot as of this frame. */
  goals: Goal[];
}

export interface MovieInfo {
  frames: MovieFrame[];
  length: number;
  head: number;
}
