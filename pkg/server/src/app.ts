import { IncomingMessage, Server, ServerResponse, createServer } from "node:http";

import { ScorerModel } from "./model";

export const MAX_TEXT_LENGTH = 4096;
const MAX_BODY_BYTES = 5 * 1024 * 1024;

function send(res: ServerResponse, status: number, payload: unknown): void {
  const body = JSON.stringify(payload);
  res.writeHead(status, {
    "Content-Type": "application/json; charset=utf-8",
    "Content-Length": Buffer.byteLength(body),
  });
  res.end(body);
}

function readBody(req: IncomingMessage): Promise<string> {
  return new Promise((resolve, reject) => {
    const chunks: Buffer[] = [];
    let size = 0;
    req.on("data", (chunk: Buffer) => {
      size += chunk.length;
      if (size > MAX_BODY_BYTES) {
        reject(new Error("request body too large"));
        req.destroy();
        return;
      }
      chunks.push(chunk);
    });
    req.on("end", () => resolve(Buffer.concat(chunks).toString("utf-8")));
    req.on("error", reject);
  });
}

// Returns an error string, or null when the body is a valid request.
function validateBody(body: unknown): string | null {
  if (typeof body !== "object" || body === null || Array.isArray(body)) {
    return "body must be a JSON object";
  }
  const texts = (body as Record<string, unknown>).texts;
  if (!Array.isArray(texts)) {
    return "body must have a 'texts' array";
  }
  if (texts.length === 0) {
    return "'texts' must be non-empty";
  }
  if (!texts.every((t) => typeof t === "string")) {
    return "every element of 'texts' must be a string";
  }
  return null;
}

async function handleScore(
  model: ScorerModel | null,
  req: IncomingMessage,
  res: ServerResponse,
): Promise<void> {
  if (model === null) {
    send(res, 503, { error: "model is still loading" });
    return;
  }
  let raw: string;
  try {
    raw = await readBody(req);
  } catch (err) {
    send(res, 400, { error: `unreadable request body: ${(err as Error).message}` });
    return;
  }
  let body: unknown;
  try {
    body = JSON.parse(raw);
  } catch {
    send(res, 400, { error: "request body is not valid JSON" });
    return;
  }
  const problem = validateBody(body);
  if (problem !== null) {
    send(res, 400, { error: problem });
    return;
  }
  const texts = (body as { texts: string[] }).texts;
  const oversize = texts.findIndex((t) => t.length > MAX_TEXT_LENGTH);
  if (oversize !== -1) {
    send(res, 413, {
      error: `text at index ${oversize} exceeds ${MAX_TEXT_LENGTH} characters`,
    });
    return;
  }
  try {
    const results = await model.scoreBatch(texts);
    send(res, 200, { results });
  } catch (err) {
    send(res, 500, { error: String(err) });
  }
}

export function buildServer(modelReady: Promise<ScorerModel>): Server {
  let model: ScorerModel | null = null;
  modelReady.then(
    (m) => {
      model = m;
    },
    () => {
      // Keep serving 503; startup failure is logged by the caller.
    },
  );

  return createServer((req, res) => {
    const url = (req.url ?? "").split("?")[0];
    if (req.method === "GET" && url === "/health") {
      if (model === null) {
        send(res, 503, { status: "loading" });
      } else {
        send(res, 200, { status: "ok", model: model.id });
      }
      return;
    }
    if (req.method === "POST" && url === "/score") {
      void handleScore(model, req, res).catch((err) => {
        if (!res.headersSent) {
          send(res, 500, { error: String(err) });
        }
      });
      return;
    }
    send(res, 404, { error: `no such endpoint: ${req.method} ${url}` });
  });
}
