// Built by `wasm-bindgen --target web --out-dir www/pkg`.
import init, { level_table, orbit_trace, mixing_gaps } from "./pkg/chaoscope_web.js";

const $ = (id) => document.getElementById(id);
const status = $("status");
const palette = ["#444", "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b"];

function fail(err) {
  status.textContent = String(err.message ?? err);
  status.className = "error";
}

function fields(form) {
  return Object.fromEntries(new FormData(form).entries());
}

function abbreviate(s) {
  return s.length > 24 ? `${s.slice(0, 8)}...${s.slice(-6)} (${s.length} digits)` : s;
}

function showLevels(max) {
  const rows = JSON.parse(level_table(max));
  const table = $("levels");
  table.innerHTML = "<tr><th>level</th><th>k</th><th>cycles</th><th>lengths</th></tr>";
  for (const r of rows) {
    const tr = table.insertRow();
    tr.insertCell().textContent = r.level;
    tr.insertCell().textContent = abbreviate(r.k);
    tr.insertCell().textContent = r.lengths.length;
    const cell = tr.insertCell();
    cell.className = "lengths";
    cell.textContent = r.lengths.map(abbreviate).join("  ") || "-";
  }
}

// Positions can exceed 2^53; a ratio only needs a few significant digits.
function fraction(pos, len) {
  const lead = Math.max(len.length - 15, 0);
  return Number(pos.slice(0, Math.max(pos.length - lead, 0)) || "0") / Number(len.slice(0, len.length - lead));
}

function drawOrbit(trace) {
  const canvas = $("orbit");
  const ctx = canvas.getContext("2d");
  const { rows, lengths } = trace;
  const lanes = trace.depth;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  if (lanes === 0) return;
  const lane = canvas.height / lanes;
  const dx = canvas.width / Math.max(rows.length - 1, 1);
  for (let n = 1; n <= lanes; n++) {
    const floor = n * lane - 4;
    const height = lane - 12;
    ctx.fillStyle = "#888";
    ctx.font = "11px sans-serif";
    ctx.fillText(`level ${n}`, 4, floor - height + 8);
    ctx.strokeStyle = "#eee";
    ctx.beginPath();
    ctx.moveTo(0, floor + 0.5);
    ctx.lineTo(canvas.width, floor + 0.5);
    ctx.stroke();
    rows.forEach((row, x) => {
      const [cycle, pos] = row.cols[n];
      const y = cycle === 0 ? floor : floor - height * fraction(pos, lengths[n][cycle - 1]);
      ctx.fillStyle = palette[cycle % palette.length];
      ctx.fillRect(x * dx - 1, y - 1, 2.5, 2.5);
    });
  }
}

function showOrbit(f) {
  const trace = JSON.parse(
    orbit_trace(+f.spine, +f.cycle, f.pos, +f.obs, f.from, +f.horizon),
  );
  drawOrbit(trace);
  $("orbit-rows").textContent = trace.rows
    .map((r) => `t=${r.t}  ` + r.cols.map(([c, p], n) => (c === 0 ? `${n}:base` : `${n}:c${c}@${p}`)).join("  "))
    .join("\n");
}

function showGaps(m, j) {
  const r = JSON.parse(mixing_gaps(m, j));
  const missing = r.missing.length ? `missing gaps: ${r.missing.join(", ")}` : "no gaps missing";
  $("gaps-summary").textContent =
    `${r.copies} copies in ${r.image_length} edges; gaps up to ${r.gap_bound} expected, ${missing}; ` +
    `prefix ${r.prefix_ok ? "ok" : "unexpected"}; trailing gap ${r.trailing_gap} ${r.trailing_ok ? "ok" : "too long"}`;
  const canvas = $("gaps");
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const maxGap = Math.max(r.gap_bound, ...r.histogram.map(([g]) => g));
  const maxCount = Math.max(...r.histogram.map(([, c]) => c), 1);
  const w = canvas.width / (maxGap + 1);
  const base = canvas.height - 16;
  for (const [gap, count] of r.histogram) {
    const h = (base - 8) * Math.log1p(count) / Math.log1p(maxCount);
    ctx.fillStyle = palette[1];
    ctx.fillRect(gap * w, base - h, Math.max(w - 1, 1), h);
  }
  ctx.fillStyle = palette[2];
  for (const gap of r.missing) ctx.fillRect(gap * w, base + 2, Math.max(w - 1, 1), 4);
  ctx.fillStyle = "#555";
  ctx.font = "11px sans-serif";
  ctx.fillText("0", 0, canvas.height - 2);
  ctx.fillText(String(maxGap), canvas.width - 8 * String(maxGap).length, canvas.height - 2);
  ctx.fillText("log count", 4, 12);
}

function wire(id, run) {
  $(id).addEventListener("submit", (e) => {
    e.preventDefault();
    status.className = "";
    status.textContent = "Working...";
    // Let the status paint before a long scan blocks the thread.
    setTimeout(() => {
      try {
        const t0 = performance.now();
        run(fields(e.target));
        status.textContent = `Done in ${Math.round(performance.now() - t0)} ms.`;
      } catch (err) {
        fail(err);
      }
    }, 0);
  });
}

init()
  .then(() => {
    wire("levels-form", (f) => showLevels(+f.max));
    wire("orbit-form", showOrbit);
    wire("gaps-form", (f) => showGaps(+f.m, +f.j));
    showLevels(4);
    showOrbit(fields($("orbit-form")));
    showGaps(1, 1);
    status.textContent = "Ready.";
  })
  .catch(fail);
