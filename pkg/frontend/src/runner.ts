/** Subprocess plumbing: every binding call is one eulergrid CLI invocation. */

import { execFileSync } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { BindingError } from "./errors.js";

/** Override with e.g. "python3 -m eulergrid" when the script is not on PATH. */
export function cliCommand(): string[] {
  const cmd = process.env.EULERGRID_CLI ?? "eulergrid";
  return cmd.split(" ").filter((part) => part.length > 0);
}

export function runCli(args: string[]): string {
  const [bin, ...prefix] = cliCommand();
  try {
    return execFileSync(bin, [...prefix, ...args], {
      encoding: "utf8",
      stdio: ["ignore", "pipe", "pipe"],
    });
  } catch (err) {
    const anyErr = err as { status?: number; stderr?: string | Buffer };
    const stderr = (anyErr.stderr ?? "").toString().trim();
    throw new BindingError(
      `eulergrid exited with status ${anyErr.status}: ${stderr}`,
      "cli",
    );
  }
}

export function withTempDir<T>(fn: (dir: string) => T): T {
  const dir = mkdtempSync(join(tmpdir(), "eulergrid-"));
  try {
    return fn(dir);
  } finally {
    rmSync(dir, { recursive: true, force: true });
  }
}
