import { ApiClient, LatestGate } from './api.js';
import { renderDocumentGraph, renderExplanation } from './render.js';
import type { GraphResponse, RecommendResponse } from './types.js';

const DEFAULT_MAX_STATEMENTS = 10;
const SLIDER_MAX = 25;

/**
 * Single-page controller: a seed document drives a ranked list on the left
 * and the seed's own graph on the right.  Picking a candidate makes it the
 * next seed (the previous one goes on a back stack); the graph panel has a
 * per-type toggle and a statement-count slider that re-request the view.
 */
export class App {
    private readonly gate = new LatestGate();
    private backStack: number[] = [];
    private currentSeed: number | null = null;
    private maxStatements = DEFAULT_MAX_STATEMENTS;
    /** Types switched OFF in the graph panel; empty means "show everything". */
    private disabledTypes = new Set<string>();
    private availableTypes: string[] = [];

    private readonly seedInput: HTMLInputElement;
    private readonly goButton: HTMLButtonElement;
    private readonly backButton: HTMLButtonElement;
    private readonly aboutButton: HTMLButtonElement;
    private readonly statusLine: HTMLElement;
    private readonly resultsPane: HTMLElement;
    private readonly graphPane: HTMLElement;
    private readonly aboutPane: HTMLElement;

    constructor(
        private readonly root: HTMLElement,
        private readonly api: ApiClient,
    ) {
        root.innerHTML = `
            <header class="toolbar">
                <label>document id
                    <input type="number" id="seed-input" min="0">
                </label>
                <button id="go-button">recommend</button>
                <button id="back-button" disabled>&larr; back</button>
                <button id="about-button">about</button>
                <span id="status-line" role="status"></span>
            </header>
            <main class="panes">
                <section id="results-pane" class="results"></section>
                <aside id="graph-pane" class="graph"></aside>
            </main>
            <section id="about-pane" class="about" hidden></section>
        `;
        this.seedInput = root.querySelector('#seed-input') as HTMLInputElement;
        this.goButton = root.querySelector('#go-button') as HTMLButtonElement;
        this.backButton = root.querySelector('#back-button') as HTMLButtonElement;
        this.aboutButton = root.querySelector('#about-button') as HTMLButtonElement;
        this.statusLine = root.querySelector('#status-line') as HTMLElement;
        this.resultsPane = root.querySelector('#results-pane') as HTMLElement;
        this.graphPane = root.querySelector('#graph-pane') as HTMLElement;
        this.aboutPane = root.querySelector('#about-pane') as HTMLElement;

        this.goButton.addEventListener('click', () => {
            const doc = Number(this.seedInput.value);
            if (Number.isFinite(doc) && this.seedInput.value !== '') {
                void this.showSeed(doc);
            }
        });
        this.seedInput.addEventListener('keydown', (event) => {
            if ((event as KeyboardEvent).key === 'Enter') {
                this.goButton.click();
            }
        });
        this.backButton.addEventListener('click', () => void this.goBack());
        this.aboutButton.addEventListener('click', () => void this.toggleAbout());
    }

    /** The ranked doc ids currently on screen (handy for tests and debugging). */
    visibleCandidates(): number[] {
        return Array.from(this.resultsPane.querySelectorAll<HTMLElement>('[data-doc-id]'))
            .map((node) => Number(node.dataset.docId));
    }

    seedOnScreen(): number | null {
        return this.currentSeed;
    }

    backDepth(): number {
        return this.backStack.length;
    }

    /** Load a new seed: candidates plus the seed's own graph. */
    async showSeed(doc: number, options: { fromBack?: boolean } = {}): Promise<void> {
        const ticket = this.gate.issue();
        this.statusLine.textContent = `loading ${doc}…`;
        let recommendation: RecommendResponse;
        try {
            recommendation = await this.api.recommend(doc);
        } catch (error) {
            if (this.gate.isCurrent(ticket)) {
                this.statusLine.textContent = String(error);
            }
            return;
        }
        if (!this.gate.isCurrent(ticket)) {
            return;     // a newer navigation superseded this response
        }

        if (!options.fromBack && this.currentSeed !== null && this.currentSeed !== doc) {
            this.backStack.push(this.currentSeed);
        }
        this.currentSeed = doc;
        this.seedInput.value = String(doc);
        this.backButton.disabled = this.backStack.length === 0;
        this.statusLine.textContent =
            `${recommendation.candidates.length} recommendations for “${recommendation.seed.title}”`;
        this.renderResults(recommendation);

        // the type filter is part of the per-document view, so reset it
        this.disabledTypes.clear();
        this.maxStatements = DEFAULT_MAX_STATEMENTS;
        await this.refreshGraph();
    }

    async goBack(): Promise<void> {
        const previous = this.backStack.pop();
        if (previous === undefined) {
            return;
        }
        await this.showSeed(previous, { fromBack: true });
        this.backButton.disabled = this.backStack.length === 0;
    }

    private renderResults(recommendation: RecommendResponse): void {
        this.resultsPane.innerHTML = '';
        const heading = document.createElement('h2');
        heading.textContent = `related to #${recommendation.seed.doc_id} ${recommendation.seed.title}`;
        this.resultsPane.appendChild(heading);

        if (recommendation.candidates.length === 0) {
            const empty = document.createElement('p');
            empty.textContent = 'nothing shares concepts or text with this document';
            this.resultsPane.appendChild(empty);
            return;
        }

        recommendation.candidates.forEach((candidate, index) => {
            const card = document.createElement('article');
            card.className = 'candidate';
            card.dataset.docId = String(candidate.doc_id);

            const title = document.createElement('h3');
            const link = document.createElement('a');
            link.href = '#';
            link.textContent = `${index + 1}. ${candidate.title}`;
            link.addEventListener('click', (event) => {
                event.preventDefault();
                void this.showSeed(candidate.doc_id);
            });
            title.appendChild(link);
            card.appendChild(title);

            const scores = document.createElement('p');
            scores.className = 'scores';
            scores.textContent =
                `fused ${candidate.fused.toFixed(4)} · ` +
                `graph ${candidate.core_overlap_norm.toFixed(4)} · ` +
                `text ${candidate.bm25_norm.toFixed(4)}`;
            card.appendChild(scores);

            card.appendChild(renderExplanation(candidate.explanation, recommendation.colors));
            this.resultsPane.appendChild(card);
        });
    }

    /** Re-request the graph view with the current slider/filter settings. */
    private async refreshGraph(): Promise<void> {
        if (this.currentSeed === null) {
            return;
        }
        const ticket = this.gate.issue();
        const enabled = this.disabledTypes.size === 0
            ? undefined
            : this.availableTypes.filter((t) => !this.disabledTypes.has(t));
        let graph: GraphResponse;
        try {
            graph = await this.api.documentGraph(this.currentSeed, this.maxStatements, enabled);
        } catch (error) {
            if (this.gate.isCurrent(ticket)) {
                this.graphPane.textContent = String(error);
            }
            return;
        }
        if (!this.gate.isCurrent(ticket)) {
            return;
        }
        this.availableTypes = graph.available_types;
        this.renderGraphPane(graph);
    }

    private renderGraphPane(graph: GraphResponse): void {
        this.graphPane.innerHTML = '';
        const heading = document.createElement('h2');
        heading.textContent = `statements in #${graph.doc_id}`;
        this.graphPane.appendChild(heading);

        const controls = document.createElement('div');
        controls.className = 'graph-controls';

        const slider = document.createElement('input');
        slider.type = 'range';
        slider.id = 'statement-slider';
        slider.min = '0';
        slider.max = String(Math.max(SLIDER_MAX, graph.total_edges));
        slider.value = String(this.maxStatements);
        slider.addEventListener('change', () => {
            this.maxStatements = Number(slider.value);
            void this.refreshGraph();
        });
        const sliderLabel = document.createElement('label');
        sliderLabel.textContent = `show ${Math.min(this.maxStatements, graph.total_edges)} of ${graph.total_edges} statements `;
        sliderLabel.appendChild(slider);
        controls.appendChild(sliderLabel);

        const typeRow = document.createElement('div');
        typeRow.className = 'type-toggles';
        for (const conceptType of graph.available_types) {
            const label = document.createElement('label');
            label.className = 'type-toggle';
            const box = document.createElement('input');
            box.type = 'checkbox';
            box.dataset.conceptType = conceptType;
            box.checked = !this.disabledTypes.has(conceptType);
            box.addEventListener('change', () => {
                if (box.checked) {
                    this.disabledTypes.delete(conceptType);
                } else {
                    this.disabledTypes.add(conceptType);
                }
                void this.refreshGraph();
            });
            const swatch = document.createElement('span');
            swatch.className = 'swatch';
            swatch.style.backgroundColor = graph.colors[conceptType] ?? '#c8c8c8';
            label.appendChild(box);
            label.appendChild(swatch);
            label.appendChild(document.createTextNode(conceptType));
            typeRow.appendChild(label);
        }
        controls.appendChild(typeRow);
        this.graphPane.appendChild(controls);
        this.graphPane.appendChild(renderDocumentGraph(graph));
    }

    private async toggleAbout(): Promise<void> {
        if (!this.aboutPane.hidden) {
            this.aboutPane.hidden = true;
            return;
        }
        const about = await this.api.about();
        this.aboutPane.innerHTML = '';
        const heading = document.createElement('h2');
        heading.textContent = `how this works (${about.corpus_size} documents indexed)`;
        const body = document.createElement('p');
        body.textContent = about.text;
        this.aboutPane.appendChild(heading);
        this.aboutPane.appendChild(body);
        this.aboutPane.hidden = false;
    }
}
