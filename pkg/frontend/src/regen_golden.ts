/** Regenerate the golden SVGs in test/golden/ from the checked-in samples. */
import { mkdirSync } from "fs";
import { dirname, join } from "path";
import { fileURLToPath } from "url";

import { render } from "./figure.js";

const root = join(dirname(fileURLToPath(import.meta.url)), "..");
const samples = join(root, "samples");
const golden = join(root, "test", "golden");
mkdirSync(golden, { recursive: true });

render({
  inputPath: join(samples, "timeseries.ndjson"),
  figureKind: "timeseries",
  outputImagePath: join(golden, "timeseries.svg"),
});
render({
  inputPath: join(samples, "drift.summary.ndjson"),
  figureKind: "drift_scaling",
  outputImagePath: join(golden, "drift_scaling.svg"),
});
render({
  inputPath: join(samples, "lifespan.summary.ndjson"),
  figureKind: "lifespan",
  outputImagePath: join(golden, "lifespan.svg"),
});
console.log(`wrote golden SVGs to ${golden}`);
