import type { ExplanationEntry, GraphResponse } from './types.js';

const SVG_NS = 'http://www.w3.org/2000/svg';

/** Fill for a node the input document does not know about. */
export const UNSHARED_FILL = '#c8c8c8';
const EDGE_STROKE = '#555555';
const DASH_PATTERN = '6 4';
const ROW_HEIGHT = 34;
const NODE_RADIUS = 7;

function svgElement<K extends keyof SVGElementTagNameMap>(
    tag: K,
    attrs: Record<string, string>,
): SVGElementTagNameMap[K] {
    const element = document.createElementNS(SVG_NS, tag);
    for (const [name, value] of Object.entries(attrs)) {
        element.setAttribute(name, value);
    }
    return element;
}

function text(x: number, y: number, content: string, anchor: string, size = 11): SVGTextElement {
    const node = svgElement('text', {
        x: String(x),
        y: String(y),
        'text-anchor': anchor,
        'font-size': String(size),
    });
    node.textContent = content;
    return node;
}

/**
 * Whether each endpoint of an explanation edge is part of the seed
 * document's graph.  Shared and EdgeOnlyNotShared edges connect two known
 * concepts; the directional statuses name the side that is new.
 */
export function endpointShared(status: ExplanationEntry['status']): {
    subject: boolean;
    object: boolean;
} {
    switch (status) {
        case 'Shared':
        case 'EdgeOnlyNotShared':
            return { subject: true, object: true };
        case 'ObjectNotShared':
            return { subject: true, object: false };
        case 'SubjectNotShared':
            return { subject: false, object: true };
    }
}

/**
 * Render one candidate's explanation as a column of little edges: solid
 * lines for statements both documents make, dashed for structure only the
 * candidate adds; endpoints keep their concept-type color when the seed
 * document knows them and turn gray when they are new.
 */
export function renderExplanation(
    entries: ExplanationEntry[],
    colors: Record<string, string>,
    width = 360,
): SVGSVGElement {
    const height = Math.max(entries.length, 1) * ROW_HEIGHT;
    const svg = svgElement('svg', {
        width: String(width),
        height: String(height),
        viewBox: `0 0 ${width} ${height}`,
        class: 'explanation',
    });
    if (entries.length === 0) {
        svg.appendChild(text(width / 2, ROW_HEIGHT / 2 + 4, 'no shared structure', 'middle'));
        return svg;
    }

    const leftX = 90;
    const rightX = width - 90;
    entries.forEach((entry, index) => {
        const y = index * ROW_HEIGHT + ROW_HEIGHT / 2;
        const shared = endpointShared(entry.status);
        const row = svgElement('g', {
            class: 'explanation-edge',
            'data-status': entry.status,
        });

        const line = svgElement('line', {
            x1: String(leftX + NODE_RADIUS),
            y1: String(y),
            x2: String(rightX - NODE_RADIUS),
            y2: String(y),
            stroke: EDGE_STROKE,
            'stroke-width': '1.5',
        });
        if (entry.status !== 'Shared') {
            line.setAttribute('stroke-dasharray', DASH_PATTERN);
        }
        row.appendChild(line);

        row.appendChild(svgElement('circle', {
            cx: String(leftX),
            cy: String(y),
            r: String(NODE_RADIUS),
            fill: shared.subject ? colors[entry.subject_type] ?? UNSHARED_FILL : UNSHARED_FILL,
            'data-role': 'subject',
        }));
        row.appendChild(svgElement('circle', {
            cx: String(rightX),
            cy: String(y),
            r: String(NODE_RADIUS),
            fill: shared.object ? colors[entry.object_type] ?? UNSHARED_FILL : UNSHARED_FILL,
            'data-role': 'object',
        }));

        row.appendChild(text(leftX - NODE_RADIUS - 4, y + 4, entry.subject, 'end'));
        row.appendChild(text(rightX + NODE_RADIUS + 4, y + 4, entry.object, 'start'));
        row.appendChild(text((leftX + rightX) / 2, y - 6, entry.predicate, 'middle', 10));

        svg.appendChild(row);
    });
    return svg;
}

/**
 * Render a document's scored edges with nodes spaced around a circle.
 * Purely deterministic (no force simulation): node order on the circle is
 * the payload's node order, so the same payload always draws the same
 * picture.
 */
export function renderDocumentGraph(payload: GraphResponse, size = 420): SVGSVGElement {
    const svg = svgElement('svg', {
        width: String(size),
        height: String(size),
        viewBox: `0 0 ${size} ${size}`,
        class: 'document-graph',
    });
    const center = size / 2;
    const radius = size / 2 - 70;

    const positions = new Map<string, { x: number; y: number }>();
    payload.nodes.forEach((node, index) => {
        const angle = (2 * Math.PI * index) / Math.max(payload.nodes.length, 1) - Math.PI / 2;
        positions.set(node.id, {
            x: center + radius * Math.cos(angle),
            y: center + radius * Math.sin(angle),
        });
    });

    const maxScore = payload.edges.reduce((top, edge) => Math.max(top, edge.score), 0);
    for (const edge of payload.edges) {
        const from = positions.get(edge.subject);
        const to = positions.get(edge.object);
        if (from === undefined || to === undefined) {
            continue;
        }
        const weight = maxScore > 0 ? 1 + 2.5 * (edge.score / maxScore) : 1;
        const group = svgElement('g', { class: 'graph-edge', 'data-predicate': edge.predicate });
        group.appendChild(svgElement('line', {
            x1: String(from.x),
            y1: String(from.y),
            x2: String(to.x),
            y2: String(to.y),
            stroke: EDGE_STROKE,
            'stroke-width': weight.toFixed(2),
            'stroke-opacity': '0.75',
        }));
        group.appendChild(text((from.x + to.x) / 2, (from.y + to.y) / 2 - 4, edge.predicate, 'middle', 9));
        svg.appendChild(group);
    }

    for (const node of payload.nodes) {
        const position = positions.get(node.id);
        if (position === undefined) {
            continue;
        }
        const group = svgElement('g', { class: 'graph-node', 'data-node-id': node.id });
        group.appendChild(svgElement('circle', {
            cx: String(position.x),
            cy: String(position.y),
            r: '10',
            fill: payload.colors[node.type] ?? UNSHARED_FILL,
            stroke: '#333333',
            'stroke-width': '1',
        }));
        const labelY = position.y < center ? position.y - 16 : position.y + 24;
        group.appendChild(text(position.x, labelY, node.label, 'middle'));
        svg.appendChild(group);
    }
    return svg;
}
