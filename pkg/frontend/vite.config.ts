import { defineConfig } from "vitest/config";

// The dev server proxies /ws to the simulation backend so the page can
// keep using ws://<page-host>/ws in both dev and production.
export default defineConfig({
  server: {
    proxy: {
      "/ws": {
        target: process.env.GRIDAGENTS_BACKEND ?? "http://127.0.0.1:8000",
        ws: true,
      },
    },
  },
  test: {
    include: ["tests/**/*.test.ts"],
  },
});
