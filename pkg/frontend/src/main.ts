/**
 * Browser entry point: an upload screen that opens a tuning session, and a
 * session screen with per-layer prominence sliders, shift inputs, an engine
 * toggle, and a live merged preview.  The only state that survives a reload
 * is the session id in the URL.
 */

import { ApiFailure, ServerUnreachable, TuneClient } from "./api.js";
import type { EngineName, PreviewPayload } from "./api.js";
import { Debouncer, PreviewScheduler } from "./scheduler.js";
import {
  COEFFICIENT_MAX,
  COEFFICIENT_MIN,
  COEFFICIENT_STEP,
  SessionModel,
  clampCoefficient,
  normalizeShift,
} from "./state.js";

const client = new TuneClient("");

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text = "",
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  if (text) node.textContent = text;
  return node;
}

function app(): HTMLElement {
  return document.getElementById("app") as HTMLElement;
}

function banner(): HTMLElement {
  return document.getElementById("banner") as HTMLElement;
}

function showBanner(message: string): void {
  banner().textContent = message;
  banner().classList.remove("hidden");
}

function clearBanner(): void {
  banner().classList.add("hidden");
}

function describe(error: unknown): string {
  if (error instanceof ServerUnreachable) return "server unreachable";
  if (error instanceof ApiFailure) return `${error.code}: ${error.message}`;
  return String(error);
}

function uploadScreen(): void {
  const root = app();
  root.replaceChildren();

  const form = el("form", { class: "upload" });
  const picker = el("input", { type: "file", multiple: "", accept: ".pgm,.png" });
  const submit = el("button", { type: "submit", disabled: "" }, "Create session");
  picker.addEventListener("change", () => {
    submit.disabled = (picker.files?.length ?? 0) === 0;
  });
  form.append(
    el("h1", {}, "Layer tuner"),
    el("p", {}, "Pick one or more grayscale images (PGM or PNG) to composite."),
    picker,
    submit,
  );
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    void (async () => {
      clearBanner();
      submit.disabled = true;
      try {
        const files = Array.from(picker.files ?? []).map((f) => ({ name: f.name, data: f }));
        const id = await client.createSession(files);
        window.location.search = `?session=${encodeURIComponent(id)}`;
      } catch (error) {
        showBanner(describe(error));
        submit.disabled = false;
      }
    })();
  });
  root.append(form);
}

async function sessionScreen(id: string): Promise<void> {
  const root = app();
  root.replaceChildren(el("p", {}, "loading session..."));

  let model: SessionModel;
  try {
    model = new SessionModel(await client.getSession(id));
  } catch (error) {
    root.replaceChildren();
    showBanner(describe(error));
    root.append(el("a", { href: window.location.pathname }, "back to upload"));
    return;
  }

  root.replaceChildren();
  const controls: Array<HTMLInputElement | HTMLButtonElement> = [];
  const setControlsDisabled = (disabled: boolean) => {
    for (const control of controls) control.disabled = disabled;
  };

  const revisionLabel = el("span", { class: "revision" }, `revision ${model.revision}`);
  const statsLabel = el("span", { class: "stats" });
  const header = el("header", {});
  header.append(el("h1", {}, "Layer tuner"), revisionLabel, statsLabel);

  const previewImg = el("img", { class: "preview", alt: "merged preview" });
  let previewUrl: string | null = null;
  const showPreview = (payload: PreviewPayload) => {
    const blob = new Blob([payload.bytes as BlobPart], { type: payload.mediaType });
    if (previewUrl !== null) URL.revokeObjectURL(previewUrl);
    previewUrl = URL.createObjectURL(blob);
    previewImg.src = previewUrl;
    revisionLabel.textContent = `revision ${payload.revision}`;
    statsLabel.textContent =
      `imag residue ${payload.imagResidue.toExponential(2)}, ` +
      `clamped ${(payload.clampedFraction * 100).toFixed(2)}%`;
  };

  const scheduler = new PreviewScheduler(
    () => client.fetchPreview(model.id, "png"),
    showPreview,
    (error) => {
      showBanner(describe(error));
      if (error instanceof ServerUnreachable) setControlsDisabled(true);
    },
  );

  const mutate = (work: () => Promise<void>) => {
    void (async () => {
      clearBanner();
      try {
        await work();
      } catch (error) {
        showBanner(describe(error));
        if (error instanceof ServerUnreachable) setControlsDisabled(true);
      }
    })();
  };

  const layerList = el("div", { class: "layers" });
  model.layers.forEach((layer, index) => {
    const row = el("div", { class: "layer" });
    const thumb = el("img", { class: "thumb", src: client.thumbUrl(model.id, index), alt: layer.name });

    const slider = el("input", {
      type: "range",
      min: String(COEFFICIENT_MIN),
      max: String(COEFFICIENT_MAX),
      step: String(COEFFICIENT_STEP),
      value: String(layer.coefficient),
    });
    const sliderValue = el("input", {
      type: "number",
      min: String(COEFFICIENT_MIN),
      max: String(COEFFICIENT_MAX),
      step: String(COEFFICIENT_STEP),
      value: String(layer.coefficient),
      class: "coeff",
    });
    const debouncer = new Debouncer();
    const pushCoefficient = (value: number) => {
      const coefficient = clampCoefficient(value);
      slider.value = String(coefficient);
      sliderValue.value = String(coefficient);
      debouncer.schedule(() =>
        mutate(async () => {
          const revision = await client.patchLayer(model.id, index, { coefficient });
          model.ackLayerPatch(index, { coefficient }, revision);
          scheduler.notify(revision);
        }),
      );
    };
    slider.addEventListener("input", () => pushCoefficient(Number(slider.value)));
    sliderValue.addEventListener("change", () => pushCoefficient(Number(sliderValue.value)));

    const sx = el("input", { type: "number", step: "1", value: String(layer.sx), class: "shift" });
    const sy = el("input", { type: "number", step: "1", value: String(layer.sy), class: "shift" });
    const subpixel = el("input", { type: "checkbox" });
    subpixel.checked = layer.subpixel;
    const pushShift = () => {
      const patch = {
        sx: normalizeShift(Number(sx.value), subpixel.checked),
        sy: normalizeShift(Number(sy.value), subpixel.checked),
      };
      sx.value = String(patch.sx);
      sy.value = String(patch.sy);
      mutate(async () => {
        const revision = await client.patchLayer(model.id, index, patch);
        model.ackLayerPatch(index, patch, revision);
        scheduler.notify(revision);
      });
    };
    sx.addEventListener("change", pushShift);
    sy.addEventListener("change", pushShift);
    subpixel.addEventListener("change", () => {
      const step = subpixel.checked ? "0.1" : "1";
      sx.step = step;
      sy.step = step;
      if (!subpixel.checked) pushShift();
    });

    controls.push(slider, sliderValue, sx, sy, subpixel);
    const shiftBox = el("label", { class: "shifts" }, "shift ");
    shiftBox.append(sx, sy);
    const subpixelBox = el("label", { class: "subpixel" });
    subpixelBox.append(subpixel, document.createTextNode(" subpixel"));
    row.append(thumb, el("span", { class: "name" }, layer.name), slider, sliderValue, shiftBox, subpixelBox);
    layerList.append(row);
  });

  const engineBox = el("div", { class: "engine" }, "engine: ");
  for (const engine of ["frequency", "spatial"] as EngineName[]) {
    const radio = el("input", { type: "radio", name: "engine", value: engine });
    radio.checked = model.engine === engine;
    radio.addEventListener("change", () => {
      mutate(async () => {
        const revision = await client.setEngine(model.id, engine);
        model.ackEngine(engine, revision);
        scheduler.notify(revision);
      });
    });
    controls.push(radio);
    const label = el("label", {});
    label.append(radio, document.createTextNode(` ${engine}`));
    engineBox.append(label);
  }

  root.append(header, engineBox, layerList, previewImg);
  scheduler.refresh();
}

function boot(): void {
  const sessionId = new URLSearchParams(window.location.search).get("session");
  if (sessionId) {
    void sessionScreen(sessionId);
  } else {
    uploadScreen();
  }
}

boot();
