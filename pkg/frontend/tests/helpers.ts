import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

const here = dirname(fileURLToPath(import.meta.url));

export function loadFixture<T>(name: string): T {
  return JSON.parse(readFixtureText(name)) as T;
}

export function readFixtureText(name: string): string {
  return readFileSync(join(here, "fixtures", name), "utf-8");
}
