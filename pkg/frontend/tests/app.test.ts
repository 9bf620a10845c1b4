import { beforeEach, describe, expect, it } from 'vitest';
import { ApiClient } from '../src/api.js';
import type { FetchLike } from '../src/api.js';
import { App } from '../src/app.js';
import type { RecommendResponse } from '../src/types.js';
import replayJson from './fixtures/replay.json';

const replay = replayJson as unknown as Record<string, unknown>;

/**
 * Fetch stub that replays recorded server responses keyed by the exact URL.
 * An unrecorded URL rejects loudly: if the app builds a URL that was never
 * recorded, the request parameters are wrong and the test should say so.
 */
function replayFetch(): { fetchFn: FetchLike; calls: string[] } {
    const calls: string[] = [];
    const fetchFn: FetchLike = (url) => {
        calls.push(url);
        const payload = replay[url];
        if (payload === undefined) {
            return Promise.reject(new Error(`no recorded response for ${url}`));
        }
        return Promise.resolve({
            ok: true,
            status: 200,
            json: () => Promise.resolve(payload),
        });
    };
    return { fetchFn, calls };
}

function fixtureCandidates(doc: number): number[] {
    const url = `/api/recommend?doc=${doc}&top=10&wg=0.6&wt=0.4&budget=6`;
    const payload = replay[url] as RecommendResponse | undefined;
    if (payload === undefined) {
        throw new Error(`fixture missing ${url}`);
    }
    return payload.candidates.map((candidate) => candidate.doc_id);
}

/** Let every queued microtask and zero-delay timer run. */
async function flush(): Promise<void> {
    await new Promise((resolve) => setTimeout(resolve, 0));
    await new Promise((resolve) => setTimeout(resolve, 0));
}

function clickCandidate(root: HTMLElement, doc: number): void {
    const link = root.querySelector<HTMLElement>(`[data-doc-id="${doc}"] a`);
    if (link === null) {
        throw new Error(`no candidate card for doc ${doc} on screen`);
    }
    link.click();
}

describe('App', () => {
    let root: HTMLElement;
    let app: App;
    let calls: string[];

    beforeEach(() => {
        document.body.innerHTML = '<div id="app"></div>';
        root = document.getElementById('app') as HTMLElement;
        const stub = replayFetch();
        calls = stub.calls;
        app = new App(root, new ApiClient('', stub.fetchFn));
    });

    it('loading a seed renders exactly the recorded candidate list', async () => {
        await app.showSeed(3);
        expect(app.visibleCandidates()).toEqual(fixtureCandidates(3));
        expect(calls).toContain('/api/recommend?doc=3&top=10&wg=0.6&wt=0.4&budget=6');
        expect(calls).toContain('/api/document/3/graph?max_statements=10');
        // every candidate card carries an explanation drawing
        const cards = root.querySelectorAll('.candidate');
        expect(cards).toHaveLength(fixtureCandidates(3).length);
        for (const card of Array.from(cards)) {
            expect(card.querySelector('svg.explanation')).not.toBeNull();
        }
    });

    it('chaining three seeds deep and walking back restores each prior list', async () => {
        await app.showSeed(3);
        expect(app.backDepth()).toBe(0);

        clickCandidate(root, 23);
        await flush();
        expect(app.seedOnScreen()).toBe(23);
        expect(app.visibleCandidates()).toEqual(fixtureCandidates(23));
        expect(app.backDepth()).toBe(1);

        clickCandidate(root, 178);
        await flush();
        expect(app.seedOnScreen()).toBe(178);
        expect(app.visibleCandidates()).toEqual(fixtureCandidates(178));
        expect(app.backDepth()).toBe(2);

        await app.goBack();
        expect(app.seedOnScreen()).toBe(23);
        expect(app.visibleCandidates()).toEqual(fixtureCandidates(23));
        expect(app.backDepth()).toBe(1);

        await app.goBack();
        expect(app.seedOnScreen()).toBe(3);
        expect(app.visibleCandidates()).toEqual(fixtureCandidates(3));
        expect(app.backDepth()).toBe(0);

        const backButton = root.querySelector('#back-button') as HTMLButtonElement;
        expect(backButton.disabled).toBe(true);
    });

    it('going back with an empty stack is a no-op', async () => {
        await app.showSeed(3);
        await app.goBack();
        expect(app.seedOnScreen()).toBe(3);
        expect(app.visibleCandidates()).toEqual(fixtureCandidates(3));
    });

    it('the statement slider re-requests the graph with max_statements set', async () => {
        await app.showSeed(3);
        const slider = root.querySelector('#statement-slider') as HTMLInputElement;
        slider.value = '5';
        slider.dispatchEvent(new Event('change'));
        await flush();
        expect(calls).toContain('/api/document/3/graph?max_statements=5');
        // the re-rendered panel keeps the chosen value
        const after = root.querySelector('#statement-slider') as HTMLInputElement;
        expect(after.value).toBe('5');
    });

    it('unticking a concept type requests the sorted remainder as a CSV filter', async () => {
        await app.showSeed(3);
        const species = root.querySelector(
            'input[data-concept-type="Species"]',
        ) as HTMLInputElement;
        expect(species.checked).toBe(true);
        species.checked = false;
        species.dispatchEvent(new Event('change'));
        await flush();
        expect(calls).toContain(
            '/api/document/3/graph?max_statements=10&types=Disease%2CDrug%2CGene%2CProcess',
        );
        // the filtered response still lists every type, so the box stays visible but unticked
        const after = root.querySelector(
            'input[data-concept-type="Species"]',
        ) as HTMLInputElement;
        expect(after.checked).toBe(false);
        const ticked = Array.from(
            root.querySelectorAll<HTMLInputElement>('input[data-concept-type]'),
        ).filter((box) => box.checked).length;
        expect(ticked).toBe(4);
    });

    it('navigating to a new seed resets the type filter', async () => {
        await app.showSeed(3);
        const species = root.querySelector(
            'input[data-concept-type="Species"]',
        ) as HTMLInputElement;
        species.checked = false;
        species.dispatchEvent(new Event('change'));
        await flush();

        clickCandidate(root, 23);
        await flush();
        // fresh document, fresh view: plain graph URL, no types parameter
        expect(calls).toContain('/api/document/23/graph?max_statements=10');
        expect(calls.some((url) => url.startsWith('/api/document/23/graph?') && url.includes('types=')))
            .toBe(false);
    });

    it('a failed load reports the error and leaves the current list alone', async () => {
        await app.showSeed(3);
        await app.showSeed(999);
        const status = root.querySelector('#status-line') as HTMLElement;
        expect(status.textContent).toContain('999');
        expect(app.visibleCandidates()).toEqual(fixtureCandidates(3));
        expect(app.backDepth()).toBe(0);
    });

    it('the about panel shows the corpus description on demand', async () => {
        const aboutButton = root.querySelector('#about-button') as HTMLButtonElement;
        aboutButton.click();
        await flush();
        const pane = root.querySelector('#about-pane') as HTMLElement;
        expect(pane.hidden).toBe(false);
        expect(pane.textContent).toContain('25 documents indexed');
        aboutButton.click();
        await flush();
        expect(pane.hidden).toBe(true);
    });

    it('the go button drives the seed input through the same path', async () => {
        const input = root.querySelector('#seed-input') as HTMLInputElement;
        input.value = '3';
        (root.querySelector('#go-button') as HTMLButtonElement).click();
        await flush();
        expect(app.seedOnScreen()).toBe(3);
        expect(app.visibleCandidates()).toEqual(fixtureCandidates(3));
    });
});
