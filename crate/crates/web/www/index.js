import init, { solve, bounds, perturb } from "./pkg/flp_web.js";

const $ = (id) => document.getElementById(id);
const palette = ["#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7"];

function show(msg) {
  $("status").textContent = msg;
}

function draw(view) {
  const cv = $("floor");
  const ctx = cv.getContext("2d");
  const [fx, fy] = view.floor;
  const pad = 20;
  const s = Math.min((cv.width - 2 * pad) / fx, (cv.height - 2 * pad) / fy);
  // y grows upward on the floor
  const px = (x) => pad + x * s;
  const py = (y) => pad + (fy - y) * s;
  ctx.clearRect(0, 0, cv.width, cv.height);
  ctx.strokeStyle = "#000";
  ctx.strokeRect(px(0), py(fy), fx * s, fy * s);
  const byId = new Map(view.boxes.map((b) => [b.id, b]));
  for (const b of view.boxes) {
    ctx.fillStyle = palette[(b.id - 1) % palette.length] + "aa";
    ctx.fillRect(px(b.cx - b.wx / 2), py(b.cy + b.wy / 2), b.wx * s, b.wy * s);
    ctx.strokeRect(px(b.cx - b.wx / 2), py(b.cy + b.wy / 2), b.wx * s, b.wy * s);
    ctx.fillStyle = "#000";
    ctx.fillText(String(b.id), px(b.cx) - 3, py(b.cy) + 4);
  }
  const maxCost = Math.max(...view.flows.map((f) => f[2]), 1e-9);
  ctx.strokeStyle = "#333";
  for (const [i, j, p] of view.flows) {
    const a = byId.get(i);
    const b = byId.get(j);
    if (!a || !b) continue;
    ctx.lineWidth = 0.5 + 3 * (p / maxCost);
    ctx.beginPath();
    ctx.moveTo(px(a.cx), py(a.cy));
    ctx.lineTo(px(b.cx), py(a.cy));
    ctx.lineTo(px(b.cx), py(b.cy));
    ctx.stroke();
  }
  ctx.lineWidth = 1;
}

function fmt(x) {
  return x === null || x === undefined ? "-" : Number(x).toPrecision(6);
}

function onSolve() {
  show("solving...");
  setTimeout(() => {
    try {
      const view = JSON.parse(solve($("instance").value, $("formulation").value, $("cuts").value, $("symmetry").checked));
      draw(view);
      show(
        `status    ${view.status}\n` +
          `objective ${fmt(view.objective)}\n` +
          `bound     ${fmt(view.bound)}  (root ${fmt(view.root_bound)})\n` +
          `gap %     ${fmt(view.gap_pct)}\n` +
          `nodes     ${view.nodes}   time ${view.time_ms.toFixed(1)} ms\n` +
          `layout    ${view.feasible === null ? "-" : view.feasible ? "feasible" : "infeasible"}`,
      );
    } catch (e) {
      show(`error: ${e}`);
    }
  }, 10);
}

function onBounds() {
  try {
    const cells = JSON.parse(bounds($("instance").value));
    const levels = ["none", "plus", "vi", "vi3"];
    const kinds = [...new Set(cells.map((c) => c.formulation))];
    let html = "<table><tr><th>formulation</th>" + levels.map((l) => `<th>${l}</th>`).join("") + "</tr>";
    for (const k of kinds) {
      html += `<tr><th>${k}</th>`;
      for (const l of levels) {
        const c = cells.find((c) => c.formulation === k && c.cuts === l);
        if (!c) {
          html += "<td>-</td>";
          continue;
        }
        const z = c.lp_bound !== null && Math.abs(c.lp_bound) < 1e-9;
        html += `<td class="${z ? "zero" : ""}" title="${c.rows} rows, ${c.binaries} binaries">${fmt(c.lp_bound)}</td>`;
      }
      html += "</tr>";
    }
    $("table").innerHTML = html + "</table>";
    show("LP relaxation values; hover a cell for model size");
  } catch (e) {
    show(`error: ${e}`);
  }
}

function onPerturb() {
  try {
    $("instance").value = perturb($("instance").value, Number($("gamma").value), Number($("alpha").value), Number($("seed").value));
    show("instance perturbed");
  } catch (e) {
    show(`error: ${e}`);
  }
}

await init();
$("solve").addEventListener("click", onSolve);
$("bounds").addEventListener("click", onBounds);
$("perturb").addEventListener("click", onPerturb);
show("ready");
