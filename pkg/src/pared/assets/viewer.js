// Pareto-front explorer for pared HTML reports.
//
// The report page carries its result document inline in a JSON script block
// (id "pared-data"); this module parses that block, draws the archive as a
// 2-D scatter over a selectable pair of objectives, highlights the Pareto
// front, and shows per-evaluation details on hover/click. Everything is
// rendered from the embedded JSON alone: no network requests, no external
// state. Rendering is a pure function of (report, axes, hover, selection);
// event handlers only mutate that state and re-render.
//
// The bundle is inlined into reports, so this source must never contain a
// literal script close tag; it is always built from the two halves below.
const DATA_BLOCK_ID = "pared-data";
const SCHEMA_VERSION = "1";
const SCRIPT_CLOSE = "</" + "script";
// what the report writer turns a close tag into (JSON-equivalent escape)
const SCRIPT_CLOSE_ESCAPED = "<\\/script";
// ---------------------------------------------------------------------------
// embedded-JSON extraction and validation
/** Recover the exact JSON text from raw report HTML. Returns null when the
 * data block is absent. The writer's only transformation is escaping close
 * tags inside the payload, undone here. */
export function extractEmbeddedJson(html) {
    const marker = `id="${DATA_BLOCK_ID}">`;
    const at = html.indexOf(marker);
    if (at < 0)
        return null;
    const start = at + marker.length;
    const end = html.indexOf(SCRIPT_CLOSE, start);
    if (end < 0)
        return null;
    return html.slice(start, end).split(SCRIPT_CLOSE_ESCAPED).join(SCRIPT_CLOSE);
}
/** Locate a parse failure for the banner. V8 sometimes reports an offset
 * directly and sometimes only quotes a snippet of the offending region, so
 * try both before giving up and showing the raw message. */
function syntaxDetail(err, text) {
    const msg = err instanceof Error ? err.message : String(err);
    if (/position \d+/.test(msg))
        return msg;
    if (/unexpected end/i.test(msg))
        return `${msg} (at position ${text.length})`;
    const quoted = /\.\.\."([\s\S]+)"\.\.\./.exec(msg) ?? /"([\s\S]+)"\.\.\./.exec(msg);
    if (quoted) {
        const at = text.indexOf(quoted[1]);
        // the engine starts its snippet a few characters before the bad token
        if (at >= 0)
            return `${msg} (near position ${Math.min(at + 10, text.length)})`;
    }
    return msg;
}
function isRecord(v) {
    return typeof v === "object" && v !== null && !Array.isArray(v);
}
function isNumberArray(v) {
    return Array.isArray(v) && v.every((x) => typeof x === "number");
}
function isStringArray(v) {
    return Array.isArray(v) && v.every((x) => typeof x === "string");
}
/** Shape-check a parsed document. Returns an error string instead of
 * throwing so callers can route everything into the banner path. */
export function validateReport(raw) {
    if (!isRecord(raw))
        return { error: "embedded data is not a JSON object" };
    if (raw.version !== SCHEMA_VERSION) {
        return {
            error: `unsupported report version ${JSON.stringify(raw.version)}; ` +
                `this viewer renders version "${SCHEMA_VERSION}"`,
        };
    }
    if (!Array.isArray(raw.evaluations))
        return { error: "evaluations is not an array" };
    const ids = new Set();
    for (const entry of raw.evaluations) {
        if (!isRecord(entry) || typeof entry.id !== "number") {
            return { error: "evaluation entries need a numeric id" };
        }
        ids.add(entry.id);
        if (entry.status === "ok") {
            if (!isNumberArray(entry.objectives) || !isStringArray(entry.labels) ||
                !isStringArray(entry.directions)) {
                return { error: `evaluation ${entry.id} lacks objective arrays` };
            }
            if (entry.labels.length !== entry.objectives.length ||
                entry.directions.length !== entry.objectives.length) {
                return { error: `evaluation ${entry.id}: labels and objectives disagree in length` };
            }
            if (!isRecord(entry.natural)) {
                return { error: `evaluation ${entry.id} lacks natural coordinates` };
            }
        }
    }
    if (!isNumberArray(raw.pareto_ids))
        return { error: "pareto_ids is not a number array" };
    for (const id of raw.pareto_ids) {
        if (!ids.has(id))
            return { error: `pareto id ${id} does not match any evaluation` };
    }
    return { data: raw };
}
export function parseReportText(text) {
    let raw;
    try {
        raw = JSON.parse(text);
    }
    catch (err) {
        return { ok: false, banner: `embedded data is not valid JSON: ${syntaxDetail(err, text)}` };
    }
    const checked = validateReport(raw);
    if (checked.error !== undefined)
        return { ok: false, banner: checked.error };
    return { ok: true, data: checked.data };
}
/** Parse the report out of a live (or stubbed) document. */
export function parseEmbedded(doc) {
    const block = doc.getElementById(DATA_BLOCK_ID);
    const text = block && typeof block.textContent === "string" ? block.textContent : null;
    if (text === null || text.trim() === "") {
        return { ok: false, banner: "no embedded data block in this page" };
    }
    return parseReportText(text);
}
// ---------------------------------------------------------------------------
// display helpers
/** Stored objectives are minimization-oriented; "max" objectives were
 * negated at write time and are shown in their native sense. This negation
 * is the only arithmetic the viewer performs on data values. */
export function displayValue(value, direction) {
    return direction === "max" ? -value : value;
}
export function fmt(v) {
    if (!Number.isFinite(v))
        return String(v);
    if (Number.isInteger(v))
        return String(v);
    return String(parseFloat(v.toPrecision(6)));
}
function esc(s) {
    return s
        .replace(/&/g, "&amp;")
        .replace(/</g, "&lt;")
        .replace(/>/g, "&gt;")
        .replace(/"/g, "&quot;");
}
/** Tooltip body: evaluation id, the natural hyperparameters, then every
 * objective under its label, un-negated for display. */
export function tooltipLines(ev) {
    const lines = [`#${ev.id}`];
    for (const [name, value] of Object.entries(ev.natural)) {
        lines.push(`${name} = ${fmt(value)}`);
    }
    if (ev.objectives && ev.labels && ev.directions) {
        ev.objectives.forEach((v, i) => {
            lines.push(`${ev.labels[i]}: ${fmt(displayValue(v, ev.directions[i]))}`);
        });
    }
    if (ev.status !== "ok")
        lines.push(`status: ${ev.status}`);
    return lines;
}
export function buildModel(data) {
    const ok = data.evaluations.filter((e) => e.status === "ok" && e.objectives !== null);
    const first = ok[0];
    return {
        data,
        ok,
        failedCount: data.evaluations.length - ok.length,
        labels: first?.labels ?? [],
        directions: first?.directions ?? [],
        pareto: new Set(data.pareto_ids),
    };
}
export function createState(data) {
    const model = buildModel(data);
    return {
        model,
        axes: [0, model.labels.length >= 2 ? 1 : 0],
        selectedId: null,
        hoverId: null,
    };
}
/** Change one axis; if that would collide with the other axis, swap them so
 * the two stay distinct. Selection is untouched (it is keyed by id). */
export function setAxis(state, which, index) {
    const q = state.model.labels.length;
    if (!Number.isInteger(index) || index < 0 || index >= q)
        return;
    const [x, y] = state.axes;
    if (which === "x") {
        state.axes = index === y ? [index, x] : [index, y];
    }
    else {
        state.axes = index === x ? [y, index] : [x, index];
    }
}
export function selectPoint(state, id) {
    state.selectedId = id;
}
export function hoverPoint(state, id) {
    state.hoverId = id;
}
// ---------------------------------------------------------------------------
// scatter geometry
const PLOT = { width: 640, height: 420, top: 18, right: 24, bottom: 46, left: 70 };
function extent(values) {
    let lo = Math.min(...values);
    let hi = Math.max(...values);
    const pad = (hi - lo || Math.max(Math.abs(lo), 1)) * 0.06;
    lo -= pad;
    hi += pad;
    return { lo, hi };
}
export function placePoints(model, axes) {
    const [xi, yi] = axes;
    const raw = model.ok.map((ev) => ({
        ev,
        vx: displayValue(ev.objectives[xi], model.directions[xi]),
        vy: displayValue(ev.objectives[yi], model.directions[yi]),
        pareto: model.pareto.has(ev.id),
    }));
    if (raw.length === 0)
        return [];
    const ex = extent(raw.map((p) => p.vx));
    const ey = extent(raw.map((p) => p.vy));
    const innerW = PLOT.width - PLOT.left - PLOT.right;
    const innerH = PLOT.height - PLOT.top - PLOT.bottom;
    return raw.map((p) => ({
        ...p,
        px: PLOT.left + ((p.vx - ex.lo) / (ex.hi - ex.lo)) * innerW,
        py: PLOT.top + innerH - ((p.vy - ey.lo) / (ey.hi - ey.lo)) * innerH,
    }));
}
// ---------------------------------------------------------------------------
// html rendering (pure string building)
const STYLE = `
.pared-viewer { font-size: 14px; }
.pared-viewer .meta { color: #444; margin-bottom: 0.6rem; }
.pared-viewer .controls { display: flex; gap: 1.2rem; align-items: center;
  margin-bottom: 0.5rem; flex-wrap: wrap; }
.pared-viewer .controls label { font-weight: 600; }
.pared-viewer .controls select { margin-left: 0.35rem; }
.pared-viewer .legend .swatch { display: inline-block; width: 0.7em; height: 0.7em;
  border-radius: 50%; margin: 0 0.25em 0 0.8em; }
.pared-viewer .swatch.pareto { background: #c2185b; }
.pared-viewer .swatch.dominated { background: #90a4ae; }
.pared-viewer .plot { position: relative; display: inline-block; }
.pared-viewer svg { background: #fafafa; border: 1px solid #ddd; }
.pared-viewer .pt { cursor: pointer; }
.pared-viewer .pt.pareto { fill: #c2185b; }
.pared-viewer .pt.dominated { fill: #90a4ae; fill-opacity: 0.75; }
.pared-viewer .pt.selected { stroke: #1a1a2e; stroke-width: 2; }
.pared-viewer .tooltip { position: absolute; pointer-events: none;
  background: #1a1a2e; color: #f5f5f5; padding: 0.35rem 0.55rem;
  border-radius: 4px; font-size: 12px; white-space: nowrap; z-index: 2; }
.pared-viewer .axis-label { font-size: 12px; fill: #333; }
.pared-viewer .tick-label { font-size: 11px; fill: #666; }
.pared-viewer .detail { margin-top: 0.8rem; border: 1px solid #ddd;
  border-radius: 4px; padding: 0.6rem 0.9rem; max-width: 640px; }
.pared-viewer .detail h2 { margin: 0 0 0.4rem; font-size: 1rem; }
.pared-viewer .detail table { border-collapse: collapse; margin-bottom: 0.4rem; }
.pared-viewer .detail td, .pared-viewer .detail th { padding: 0.1rem 0.7rem 0.1rem 0;
  text-align: left; font-weight: normal; }
.pared-viewer .detail .summary { max-height: 14rem; overflow: auto;
  font-family: ui-monospace, monospace; font-size: 12px; }
.pared-viewer .detail dl { margin: 0 0 0 0.9rem; }
.pared-viewer .detail dt { font-weight: 600; }
.pared-viewer .detail dd { margin: 0 0 0.15rem 0.9rem; }
.pared-viewer .banner { background: #fdecea; border: 1px solid #c0392b;
  color: #7b241c; padding: 0.6rem 1rem; border-radius: 4px; }
`;
export function bannerHtml(message) {
    return `<div class="banner">${esc(message)}</div>`;
}
function summaryHtml(value) {
    if (value === null || value === undefined)
        return "null";
    if (typeof value === "number")
        return esc(fmt(value));
    if (typeof value === "string" || typeof value === "boolean")
        return esc(String(value));
    if (Array.isArray(value)) {
        return "[" + value.map(summaryHtml).join(", ") + "]";
    }
    if (isRecord(value)) {
        const rows = Object.entries(value)
            .map(([k, v]) => `<dt>${esc(k)}</dt><dd>${summaryHtml(v)}</dd>`)
            .join("");
        return `<dl>${rows}</dl>`;
    }
    return "";
}
function controlsHtml(state) {
    const options = (active) => state.model.labels
        .map((label, i) => `<option value="${i}"${i === active ? " selected" : ""}>${esc(label)}</option>`)
        .join("");
    return `<div class="controls">
<label>x axis<select data-role="axis-x">${options(state.axes[0])}</select></label>
<label>y axis<select data-role="axis-y">${options(state.axes[1])}</select></label>
<span class="legend"><span class="swatch pareto"></span>Pareto front` +
        `<span class="swatch dominated"></span>dominated</span>
</div>`;
}
function scatterHtml(state, placed) {
    const [xi, yi] = state.axes;
    const m = state.model;
    const innerRight = PLOT.width - PLOT.right;
    const innerBottom = PLOT.height - PLOT.bottom;
    const parts = [];
    parts.push(`<svg width="${PLOT.width}" height="${PLOT.height}" role="img">`, `<line x1="${PLOT.left}" y1="${innerBottom}" x2="${innerRight}" y2="${innerBottom}" stroke="#999"/>`, `<line x1="${PLOT.left}" y1="${PLOT.top}" x2="${PLOT.left}" y2="${innerBottom}" stroke="#999"/>`, `<text class="axis-label" x="${(PLOT.left + innerRight) / 2}" y="${PLOT.height - 8}" text-anchor="middle">${esc(m.labels[xi] ?? "")}</text>`, `<text class="axis-label" x="14" y="${(PLOT.top + innerBottom) / 2}" text-anchor="middle" transform="rotate(-90 14 ${(PLOT.top + innerBottom) / 2})">${esc(m.labels[yi] ?? "")}</text>`);
    if (placed.length > 0) {
        const xs = placed.map((p) => p.vx);
        const ys = placed.map((p) => p.vy);
        parts.push(`<text class="tick-label" x="${PLOT.left}" y="${innerBottom + 14}">${fmt(Math.min(...xs))}</text>`, `<text class="tick-label" x="${innerRight}" y="${innerBottom + 14}" text-anchor="end">${fmt(Math.max(...xs))}</text>`, `<text class="tick-label" x="${PLOT.left - 4}" y="${innerBottom}" text-anchor="end">${fmt(Math.min(...ys))}</text>`, `<text class="tick-label" x="${PLOT.left - 4}" y="${PLOT.top + 10}" text-anchor="end">${fmt(Math.max(...ys))}</text>`);
    }
    // dominated first so front points draw on top of them
    const ordered = [...placed].sort((a, b) => Number(a.pareto) - Number(b.pareto));
    for (const p of ordered) {
        const classes = `pt ${p.pareto ? "pareto" : "dominated"}` +
            (p.ev.id === state.selectedId ? " selected" : "");
        const r = p.pareto ? 5 : 3.5;
        parts.push(`<circle class="${classes}" data-id="${p.ev.id}" cx="${p.px.toFixed(1)}" cy="${p.py.toFixed(1)}" r="${r}"/>`);
    }
    parts.push("</svg>");
    return parts.join("");
}
function tooltipHtml(state, placed) {
    if (state.hoverId === null)
        return "";
    const p = placed.find((q) => q.ev.id === state.hoverId);
    if (!p)
        return "";
    const body = tooltipLines(p.ev).map(esc).join("<br>");
    const left = Math.min(p.px + 12, PLOT.width - 150);
    const top = Math.max(p.py - 10, 0);
    return `<div class="tooltip" style="left:${left.toFixed(0)}px;top:${top.toFixed(0)}px">${body}</div>`;
}
function detailHtml(state) {
    const targetId = state.hoverId ?? state.selectedId;
    if (targetId === null) {
        return `<div class="detail"><h2>details</h2>Hover over a point, or click to pin it.</div>`;
    }
    const ev = state.model.data.evaluations.find((e) => e.id === targetId);
    if (!ev)
        return "";
    const pinned = state.hoverId === null ? " (pinned)" : "";
    const front = state.model.pareto.has(ev.id) ? ", Pareto front" : "";
    const params = Object.entries(ev.natural)
        .map(([k, v]) => `<tr><td>${esc(k)}</td><td>${fmt(v)}</td></tr>`)
        .join("");
    let objectives = "";
    if (ev.objectives && ev.labels && ev.directions) {
        objectives = ev.objectives
            .map((v, i) => `<tr><td>${esc(ev.labels[i])}</td><td>${fmt(displayValue(v, ev.directions[i]))}</td>` +
            `<td>${ev.directions[i] === "max" ? "maximized" : "minimized"}</td></tr>`)
            .join("");
    }
    return `<div class="detail">
<h2>evaluation #${ev.id}${pinned}</h2>
<div>status: ${esc(ev.status)}${front}</div>
<table><tbody>${params}${objectives}</tbody></table>
<div class="summary">${summaryHtml(ev.summary)}</div>
</div>`;
}
/** One full render of the viewer. Pure: depends only on the state value. */
export function viewHtml(state) {
    const m = state.model;
    const trace = m.data.hypervolume_trace;
    const volume = trace.length > 0 ? fmt(trace[trace.length - 1]) : "n/a";
    const meta = `family ${esc(m.data.family)}, seed ${m.data.seed}, ` +
        `${m.data.evaluations.length} evaluations (${m.failedCount} failed), ` +
        `${m.data.pareto_ids.length} on the Pareto front, dominated hypervolume ${volume}`;
    if (m.ok.length === 0) {
        return `<style>${STYLE}</style><div class="pared-viewer">` +
            `<div class="meta">${meta}</div>` +
            bannerHtml("no successful evaluations to plot") + "</div>";
    }
    const placed = placePoints(m, state.axes);
    return `<style>${STYLE}</style><div class="pared-viewer">
<div class="meta">${meta}</div>
${controlsHtml(state)}
<div class="plot" data-plot="1">${scatterHtml(state, placed)}${tooltipHtml(state, placed)}</div>
${detailHtml(state)}
</div>`;
}
// ---------------------------------------------------------------------------
// event wiring
/** Walk up from an event target, collecting the nearest data-id and whether
 * the target sits inside the plot area. Structural so tests can fake it. */
function locateTarget(target) {
    let node = target;
    let id = null;
    let inPlot = false;
    while (node && typeof node === "object") {
        if (typeof node.getAttribute === "function") {
            if (id === null) {
                const v = node.getAttribute("data-id");
                if (v !== null && v !== undefined)
                    id = Number(v);
            }
            const plot = node.getAttribute("data-plot");
            if (plot !== null && plot !== undefined)
                inPlot = true;
        }
        node = node.parentNode;
    }
    return { inPlot, id };
}
function wireEvents(app, state, rerender) {
    if (typeof app.addEventListener !== "function")
        return;
    app.addEventListener("change", (ev) => {
        const target = ev.target;
        if (!target || typeof target.getAttribute !== "function")
            return;
        const role = target.getAttribute("data-role");
        if (role === "axis-x" || role === "axis-y") {
            setAxis(state, role === "axis-x" ? "x" : "y", Number(target.value));
            rerender();
        }
    });
    app.addEventListener("click", (ev) => {
        const { inPlot, id } = locateTarget(ev.target);
        if (!inPlot)
            return;
        // clicking a pinned point unpins it; clicking the background clears
        selectPoint(state, id === state.selectedId ? null : id);
        rerender();
    });
    app.addEventListener("mouseover", (ev) => {
        const { inPlot, id } = locateTarget(ev.target);
        if (!inPlot || id === state.hoverId)
            return;
        hoverPoint(state, id);
        rerender();
    });
}
/** Entry point: parse the embedded report and mount the explorer (or an
 * error banner) into #app. Safe to call with a stub document. */
export function bootstrap(doc) {
    const app = doc.getElementById("app");
    if (!app)
        return;
    const outcome = parseEmbedded(doc);
    if (!outcome.ok) {
        app.innerHTML = `<style>${STYLE}</style>` + bannerHtml(outcome.banner);
        return;
    }
    const state = createState(outcome.data);
    const rerender = () => {
        app.innerHTML = viewHtml(state);
    };
    wireEvents(app, state, rerender);
    rerender();
}
if (typeof document !== "undefined") {
    bootstrap(document);
}
