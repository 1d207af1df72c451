import { readFileSync, readdirSync } from "node:fs";
import path from "node:path";
import { fileURLToPath } from "node:url";

export const TESTS_DIR = path.dirname(fileURLToPath(import.meta.url));
export const FRONTEND_DIR = path.resolve(TESTS_DIR, "..");
export const REPO_ROOT = path.resolve(FRONTEND_DIR, "..");
export const SCHEMAS_DIR = path.join(REPO_ROOT, "schemas");
export const FIXTURES_DIR = path.join(TESTS_DIR, "fixtures");

export function loadFixture<T>(name: string): T {
  const raw = readFileSync(path.join(FIXTURES_DIR, name), "utf-8");
  return JSON.parse(raw) as T;
}

export function loadSchemas(): Array<Record<string, unknown>> {
  return readdirSync(SCHEMAS_DIR)
    .filter((name) => name.endsWith(".json"))
    .map((name) => {
      const raw = readFileSync(path.join(SCHEMAS_DIR, name), "utf-8");
      return JSON.parse(raw) as Record<string, unknown>;
    });
}

export const SCHEMA_ID_BASE = "https://xchat.invalid/schemas/";
