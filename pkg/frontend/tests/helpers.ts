import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

export function fixtureText(name: string): string {
  return readFileSync(join(FIXTURES, name), "utf-8");
}

export function fixtureJson(name: string): any {
  return JSON.parse(fixtureText(name));
}

/** Re-encode a structurally edited copy of a fixture. */
export function mutated(name: string, edit: (doc: any) => void): string {
  const doc = fixtureJson(name);
  edit(doc);
  return JSON.stringify(doc);
}

export function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

export function textResponse(text: string, status = 200): Response {
  return new Response(text, { status });
}
