import init, { count, enumerate, clt } from "./pkg/involfact_wasm.js";

const $ = (id) => document.getElementById(id);

function show(el, f) {
  el.classList.remove("error");
  try {
    el.textContent = f();
  } catch (e) {
    el.classList.add("error");
    el.textContent = String(e);
  }
}

function runCount() {
  show($("count-out"), () => {
    const r = JSON.parse(count($("count-input").value, $("count-one-based").checked));
    const factors = r.factors.map((f) => `  k=${f.length} c=${f.multiplicity}: ${f.factor}`).join("\n");
    return `degree ${r.degree}, cycle type ${r.cycle_type}\nN = ${r.N}\nB = ${r.B}\nln N = ${r.log_N.toFixed(6)}\n${factors}`;
  });
}

function runEnumerate() {
  show($("enum-out"), () => {
    const limit = Math.max(1, Number($("enum-limit").value) | 0);
    const r = JSON.parse(enumerate($("enum-input").value, $("enum-one-based").checked, limit));
    const rows = r.factorizations.map(
      (f) => `${f.tau1}\t${f.tau2}${f.exchanged_pairs ? `\t[${f.exchanged_pairs} exchanged]` : ""}`,
    );
    rows.push(`# shown ${r.factorizations.length} of ${r.total}`);
    return rows.join("\n");
  });
}

function drawHistogram(r) {
  const canvas = $("clt-canvas");
  const ctx = canvas.getContext("2d");
  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);
  const bins = r.histogram.filter((b) => b.left !== "-inf" && b.left < 5);
  const top = Math.max(...bins.map((b) => b.count), ...r.expected) * 1.1 || 1;
  const x = (v) => ((v + 5) / 10) * width;
  const y = (c) => height - 20 - (c / top) * (height - 30);

  ctx.fillStyle = "#7aa6d6";
  for (const b of bins) {
    ctx.fillRect(x(b.left) + 1, y(b.count), x(b.left + 0.25) - x(b.left) - 2, height - 20 - y(b.count));
  }

  ctx.strokeStyle = "#c33";
  ctx.lineWidth = 2;
  ctx.beginPath();
  const step = 0.05;
  for (let v = -5; v <= 5; v += step) {
    const density = Math.exp(-v * v / 2) / Math.sqrt(2 * Math.PI);
    const c = density * 0.25 * r.samples;
    v === -5 ? ctx.moveTo(x(v), y(c)) : ctx.lineTo(x(v), y(c));
  }
  ctx.stroke();

  ctx.fillStyle = "#000";
  ctx.font = "12px sans-serif";
  for (let v = -5; v <= 5; v++) ctx.fillText(String(v), x(v) - 4, height - 5);
}

function runClt() {
  const summary = $("clt-summary");
  show(summary, () => {
    const r = JSON.parse(
      clt(
        Number($("clt-n").value),
        Number($("clt-samples").value),
        BigInt($("clt-seed").value || 0),
        $("clt-stat").value,
      ),
    );
    drawHistogram(r);
    return `mean ${r.mean.toFixed(4)}, stdev ${r.stdev.toFixed(4)}, KS distance ${r.ks_distance.toFixed(4)} (mu_n ${r.mu_n.toFixed(3)}, sigma_n ${r.sigma_n.toFixed(3)})`;
  });
}

await init();
$("count-run").onclick = runCount;
$("enum-run").onclick = runEnumerate;
$("clt-run").onclick = runClt;
runCount();
runEnumerate();
runClt();
