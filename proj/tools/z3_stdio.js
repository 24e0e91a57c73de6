#!/usr/bin/env node
// SMT-LIB 2 stdio adapter around the z3-solver WASM build.
//
// Reads SMT-LIB commands from stdin. Commands are buffered until a line
// consisting of exactly  (echo "@@SYNC@@")  arrives; the batch is then
// evaluated on a persistent context (state carries over between batches,
// so incremental use works) and the output is written to stdout followed
// by the @@SYNC@@ marker line.
//
// Intended for environments without a native z3 binary:
//   REGSOLVE_SOLVER="node tools/z3_stdio.js" regsolve solve problem.rsp

'use strict';

const SYNC_CMD = '(echo "@@SYNC@@")';
const SYNC_OUT = '@@SYNC@@';

function loadZ3Module() {
  const candidates = [];
  if (process.env.Z3_SOLVER_MODULE) candidates.push(process.env.Z3_SOLVER_MODULE);
  candidates.push('z3-solver');
  candidates.push('/usr/lib/node_modules/z3-solver');
  candidates.push('/usr/local/lib/node_modules/z3-solver');
  for (const c of candidates) {
    try { return require(c); } catch (e) { /* try next */ }
  }
  process.stderr.write('z3_stdio: cannot locate the z3-solver node module\n');
  process.exit(2);
}

async function main() {
  const { init } = loadZ3Module();
  const { Z3 } = await init();
  const cfg = Z3.mk_config();
  const ctx = Z3.mk_context(cfg);

  let pending = [];
  let buffered = '';
  let closed = false;
  let busy = false;

  async function drain() {
    if (busy) return;
    busy = true;
    while (pending.length > 0) {
      const batch = pending.shift();
      let out = '';
      if (process.env.Z3_STDIO_LOG) {
        require('fs').appendFileSync(process.env.Z3_STDIO_LOG,
          '==== batch pid ' + process.pid + ' ====\n' + batch);
      }
      try {
        out = await Z3.eval_smtlib2_string(ctx, batch);
      } catch (e) {
        out = '(error "' + String(e).replace(/"/g, "'") + '")\n';
      }
      if (out.length > 0 && !out.endsWith('\n')) out += '\n';
      if (process.env.Z3_STDIO_LOG) {
        require('fs').appendFileSync(process.env.Z3_STDIO_LOG,
          '---- reply pid ' + process.pid + ' ----\n' + out);
      }
      process.stdout.write(out + SYNC_OUT + '\n');
    }
    busy = false;
    if (closed) process.exit(0);
  }

  process.stdin.setEncoding('utf8');
  process.stdin.on('data', (chunk) => {
    buffered += chunk;
    let idx;
    while ((idx = buffered.indexOf('\n')) >= 0) {
      const line = buffered.slice(0, idx);
      buffered = buffered.slice(idx + 1);
      if (line.trim() === SYNC_CMD) {
        pending.push(currentBatch.join('\n') + '\n');
        currentBatch.length = 0;
        drain();
      } else {
        currentBatch.push(line);
      }
    }
  });
  const currentBatch = [];
  process.stdin.on('end', () => {
    closed = true;
    if (!busy && pending.length === 0) process.exit(0);
  });
}

main().catch((e) => {
  process.stderr.write('z3_stdio: ' + String(e) + '\n');
  process.exit(2);
});
