/** Payload shapes of the JSON API (see the service docs for the routes). */

export type EdgeStatusName =
    | 'Shared'
    | 'SubjectNotShared'
    | 'ObjectNotShared'
    | 'EdgeOnlyNotShared';

export interface ExplanationEntry {
    subject: string;
    subject_type: string;
    predicate: string;
    object: string;
    object_type: string;
    status: EdgeStatusName;
    score: number;
}

export interface Candidate {
    doc_id: number;
    title: string;
    fused: number;
    core_overlap_raw: number;
    core_overlap_norm: number;
    bm25_raw: number;
    bm25_norm: number;
    explanation: ExplanationEntry[];
}

export interface RecommendResponse {
    seed: { doc_id: number; title: string };
    params: { top: number; wg: number; wt: number; budget: number };
    candidates: Candidate[];
    colors: Record<string, string>;
}

export interface GraphNode {
    id: string;
    type: string;
    label: string;
}

export interface GraphEdge {
    subject: string;
    subject_type: string;
    predicate: string;
    object: string;
    object_type: string;
    score: number;
}

export interface GraphResponse {
    doc_id: number;
    title: string;
    available_types: string[];
    total_edges: number;
    nodes: GraphNode[];
    edges: GraphEdge[];
    colors: Record<string, string>;
}

export interface AboutResponse {
    text: string;
    corpus_size: number;
}
