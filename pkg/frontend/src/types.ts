// Wire types mirroring the recommendation service's JSON payloads.

export interface PaperInfo {
  readonly id: string;
  readonly title: string;
  readonly year: number;
  readonly venue: string;
  readonly authors: string[];
}

export interface ResultEntry {
  readonly rank: number;
  readonly paper: PaperInfo;
  readonly evidence: string;
  readonly span_id: number;
  readonly p_r: number;
  readonly p_s: number;
  readonly scores: Record<string, number>;
}

export interface RecommendPayload {
  readonly query: string;
  readonly route: string; // "lexical" | "semantic" | "lexical_fallback"
  readonly results: ResultEntry[];
}

export interface EvidenceCitation {
  readonly paper: { paper_id: string; title?: string; year?: number };
  readonly support: number;
}

export interface EvidenceDetail {
  readonly span_id: number;
  readonly span_text: string;
  readonly citations: EvidenceCitation[];
  readonly provenance: { paper_id: string; sentence_index: number }[];
}

export interface DisplayOptions {
  k: number;
  showScores: boolean;
  showRouteBadge: boolean;
}
