import { buildServer } from "./app";
import { createLexiconModel } from "./model";

const port = Number.parseInt(process.env.PET_SCORER_PORT ?? "8571", 10);

const server = buildServer(Promise.resolve(createLexiconModel()));
server.listen(port, () => {
  console.log(`scorer listening on port ${port}`);
});

for (const signal of ["SIGINT", "SIGTERM"] as const) {
  process.on(signal, () => {
    server.close(() => process.exit(0));
  });
}
