/** Spawn the real qpmut HTTP server for end-to-end tests. */

import { ChildProcess, spawn } from "node:child_process";
import { fileURLToPath } from "node:url";
import path from "node:path";

export const REPO_ROOT = path.resolve(
  path.dirname(fileURLToPath(import.meta.url)), "..", "..",
);

export interface RunningServer {
  base: string;
  stop: () => void;
}

export async function startServer(): Promise<RunningServer> {
  const port = 18100 + Math.floor(Math.random() * 1800);
  const proc: ChildProcess = spawn(
    "python3",
    ["-m", "qpmut.cli", "serve", "--port", String(port)],
    { cwd: REPO_ROOT, stdio: ["ignore", "pipe", "pipe"] },
  );
  const base = `http://127.0.0.1:${port}`;
  const deadline = Date.now() + 20000;
  let lastError: unknown = null;
  while (Date.now() < deadline) {
    try {
      const resp = await fetch(`${base}/fixtures`);
      if (resp.ok) {
        return {
          base,
          stop: () => {
            proc.kill("SIGTERM");
          },
        };
      }
    } catch (err) {
      lastError = err;
    }
    await new Promise((r) => setTimeout(r, 150));
  }
  proc.kill("SIGTERM");
  throw new Error(`qpmut server did not come up on ${base}: ${lastError}`);
}
