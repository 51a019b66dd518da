import init, { invariant_table, contact, chow_eval } from "./pkg/semple_gw_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function renderTable(data) {
  if (data.error) return `<p class="error">${data.error}</p>`;
  const degrees = Object.keys(data);
  const labels = Object.keys(data[degrees[0]]);
  let html = "<table><tr><th></th>" + degrees.map((d) => `<th>d=${d}</th>`).join("") + "</tr>";
  for (const l of labels) {
    html += `<tr><th>${l}</th>` + degrees.map((d) => `<td>${data[d][l]}</td>`).join("") + "</tr>";
  }
  return html + "</table>";
}

function show(el, data, lines) {
  el.className = data.error ? "error" : "";
  el.textContent = data.error ? data.error : lines(data).join("\n");
}

await init();

$("table-form").addEventListener("submit", (e) => {
  e.preventDefault();
  $("table-out").innerHTML = renderTable(JSON.parse(invariant_table(num("table-degree"))));
});

$("contact-form").addEventListener("submit", (e) => {
  e.preventDefault();
  const r = JSON.parse(contact(num("contact-degree"), num("contact-c"), num("contact-cdual"), num("contact-kappa")));
  show($("contact-out"), r, (r) => [`count   ${r.count}`, `formula ${r.formula}`, ...(r.warnings || []).map((w) => `warning ${w}`)]);
});

$("chow-form").addEventListener("submit", (e) => {
  e.preventDefault();
  const r = JSON.parse(chow_eval($("chow-expr").value, $("chow-basis").value));
  show($("chow-out"), r, (r) => [r.normal_form, `integral ${r.integral}`]);
});

$("table-form").requestSubmit();
