import init, { susceptibilitySpectrum, pearsonCurve, localTurCurve } from "./pkg/synctur_wasm.js";

const COLORS = ["#1f77b4", "#d62728", "#2ca02c"];

function rows(flat, width) {
  const out = [];
  for (let i = 0; i < flat.length; i += width) out.push(Array.from(flat.slice(i, i + width)));
  return out;
}

function values(panel) {
  const v = {};
  for (const input of document.querySelectorAll(`[data-panel="${panel}"] input`)) {
    const x = parseFloat(input.value);
    v[input.name] = input.name.startsWith("log") ? 10 ** x : x;
    input.nextElementSibling.value = v[input.name].toPrecision(3);
  }
  return v;
}

// series: [{ points: [[x, y]], color, dash }]; xLog puts x on a log scale
function plot(canvas, series, { xLog = false, yRange = null, shade = [], xLabel = "", yLabel = "" } = {}) {
  const ctx = canvas.getContext("2d");
  const W = canvas.width, H = canvas.height, L = 60, R = 15, T = 15, B = 40;
  ctx.clearRect(0, 0, W, H);
  const fx = (x) => (xLog ? Math.log10(x) : x);
  const pts = series.flatMap((s) => s.points).filter(([x, y]) => Number.isFinite(y));
  if (pts.length === 0) return;
  const xs = pts.map(([x]) => fx(x));
  let [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  let [y0, y1] = yRange ?? [Math.min(...pts.map((p) => p[1])), Math.max(...pts.map((p) => p[1]))];
  if (y0 === y1) { y0 -= 1; y1 += 1; }
  const px = (x) => L + ((fx(x) - x0) / (x1 - x0)) * (W - L - R);
  const py = (y) => T + (1 - (y - y0) / (y1 - y0)) * (H - T - B);

  ctx.fillStyle = "rgba(31,119,180,0.12)";
  for (const [a, b] of shade) ctx.fillRect(px(a), T, px(b) - px(a), H - T - B);

  ctx.strokeStyle = "#999";
  ctx.strokeRect(L, T, W - L - R, H - T - B);
  ctx.fillStyle = "#444";
  ctx.font = "12px system-ui";
  ctx.textAlign = "center";
  for (let i = 0; i <= 4; i++) {
    const x = x0 + ((x1 - x0) * i) / 4;
    const label = xLog ? `1e${x.toFixed(1)}` : x.toFixed(2);
    ctx.fillText(label, L + ((W - L - R) * i) / 4, H - B + 16);
  }
  ctx.fillText(xLabel, (L + W - R) / 2, H - 6);
  ctx.textAlign = "right";
  for (let i = 0; i <= 4; i++) {
    const y = y0 + ((y1 - y0) * i) / 4;
    ctx.fillText(y.toPrecision(2), L - 6, py(y) + 4);
  }
  ctx.save();
  ctx.translate(14, (T + H - B) / 2);
  ctx.rotate(-Math.PI / 2);
  ctx.textAlign = "center";
  ctx.fillText(yLabel, 0, 0);
  ctx.restore();

  ctx.save();
  ctx.beginPath();
  ctx.rect(L, T, W - L - R, H - T - B);
  ctx.clip();
  for (const s of series) {
    ctx.strokeStyle = s.color;
    ctx.setLineDash(s.dash ?? []);
    ctx.lineWidth = 1.8;
    ctx.beginPath();
    let pen = false;
    for (const [x, y] of s.points) {
      if (!Number.isFinite(y)) { pen = false; continue; }
      pen ? ctx.lineTo(px(x), py(y)) : ctx.moveTo(px(x), py(y));
      pen = true;
    }
    ctx.stroke();
  }
  ctx.restore();
}

function drawSpectrum() {
  const v = values("spectrum");
  const data = rows(susceptibilitySpectrum(v.omegaB, v.logGamma2, 2.0, 600), 3);
  plot(document.getElementById("spectrum"), [
    { points: data.map((r) => [r[0], r[1]]), color: COLORS[0] },
    { points: data.map((r) => [r[0], r[2]]), color: COLORS[1] },
  ], { xLabel: "ω", yLabel: "eigenvalues of Im χ" });
}

function drawPearson() {
  const v = values("pearson");
  const data = rows(pearsonCurve(v.omegaB, v.logGamma2, 0.01, 10, 80), 3);
  plot(document.getElementById("pearson"), [
    { points: data.map((r) => [r[0], r[1]]), color: COLORS[0] },
    { points: data.map((r) => [r[0], r[2]]), color: COLORS[2], dash: [5, 4] },
  ], { xLog: true, yRange: [-1, 0.05], xLabel: "T", yLabel: "C (solid), C̃ (dashed)" });
}

function drawTur() {
  const v = values("tur");
  const data = rows(localTurCurve(v.logOmegaC, v.logGamma2, v.logT1, v.logT2, Math.PI / 2, 0.01, 1000, 160), 4);
  const shade = [];
  for (let i = 0; i + 1 < data.length; i++) {
    if (data[i][2] < 2 && data[i][1] < 0) shade.push([data[i][0], data[i + 1][0]]);
  }
  const q = data.map((r) => [r[0], Number.isFinite(r[2]) ? Math.log10(r[2]) : NaN]);
  plot(document.getElementById("tur"), [
    { points: q, color: COLORS[0] },
    { points: data.map((r) => [r[0], Math.log10(2)]), color: "#888", dash: [6, 4] },
  ], { xLog: true, shade, xLabel: "Ω", yLabel: "log₁₀ Q_PA" });
}

const panels = { spectrum: drawSpectrum, pearson: drawPearson, tur: drawTur };

function guarded(draw) {
  const status = document.getElementById("status");
  try {
    draw();
    status.textContent = "";
    status.className = "";
  } catch (e) {
    status.textContent = String(e.message ?? e);
    status.className = "error";
  }
}

await init();
for (const [name, draw] of Object.entries(panels)) {
  for (const input of document.querySelectorAll(`[data-panel="${name}"] input`)) {
    input.addEventListener("input", () => guarded(draw));
  }
  guarded(draw);
}
