import type { AboutResponse, GraphResponse, RecommendResponse } from './types.js';

/** Structural subset of window.fetch the client needs (easy to stub in tests). */
export interface FetchLike {
    (url: string): Promise<{ ok: boolean; status: number; json(): Promise<unknown> }>;
}

export interface RecommendOptions {
    top?: number;
    wg?: number;
    wt?: number;
    budget?: number;
}

export class ApiError extends Error {
    constructor(public readonly status: number, public readonly url: string) {
        super(`request failed (${status}): ${url}`);
    }
}

/**
 * Typed client for the recommendation API.
 *
 * Identical GET requests issued while the first is still in flight share one
 * promise, so double-clicks and overlapping renders do not stampede the
 * server.  Once a request settles it is forgotten and the next call fetches
 * fresh.
 */
export class ApiClient {
    private inFlight = new Map<string, Promise<unknown>>();

    constructor(
        private readonly baseUrl: string = '',
        private readonly fetchFn: FetchLike = (url) => fetch(url),
    ) {}

    recommend(doc: number, options: RecommendOptions = {}): Promise<RecommendResponse> {
        const params = new URLSearchParams();
        params.append('doc', String(doc));
        params.append('top', String(options.top ?? 10));
        params.append('wg', String(options.wg ?? 0.6));
        params.append('wt', String(options.wt ?? 0.4));
        params.append('budget', String(options.budget ?? 6));
        return this.getJson(`/api/recommend?${params.toString()}`);
    }

    /**
     * Fetch the scored graph edges of one document.  `enabledTypes` is the
     * set of concept types to keep; undefined means "no filter".  Types are
     * sorted so equal filters always produce the same URL.
     */
    documentGraph(
        doc: number,
        maxStatements: number,
        enabledTypes?: string[],
    ): Promise<GraphResponse> {
        const params = new URLSearchParams();
        params.append('max_statements', String(maxStatements));
        if (enabledTypes !== undefined) {
            params.append('types', [...enabledTypes].sort().join(','));
        }
        return this.getJson(`/api/document/${doc}/graph?${params.toString()}`);
    }

    about(): Promise<AboutResponse> {
        return this.getJson('/api/about');
    }

    private getJson<T>(path: string): Promise<T> {
        const url = this.baseUrl + path;
        const pending = this.inFlight.get(url);
        if (pending !== undefined) {
            return pending as Promise<T>;
        }
        const request = this.fetchFn(url)
            .then((response) => {
                if (!response.ok) {
                    throw new ApiError(response.status, url);
                }
                return response.json() as Promise<T>;
            })
            .finally(() => {
                this.inFlight.delete(url);
            });
        this.inFlight.set(url, request);
        return request;
    }
}

/**
 * Guard against out-of-order responses: every request takes a ticket, and
 * only the response holding the newest ticket may touch the view.
 *
 *     const ticket = gate.issue();
 *     const data = await api.documentGraph(...);
 *     if (!gate.isCurrent(ticket)) return;   // a newer request superseded us
 */
export class LatestGate {
    private sequence = 0;

    issue(): number {
        this.sequence += 1;
        return this.sequence;
    }

    isCurrent(ticket: number): boolean {
        return ticket === this.sequence;
    }
}
