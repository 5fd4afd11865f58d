"""Time the numba kernels against the numpy fallback.

Each backend runs in a fresh interpreter because ``SOFTA_NUMBA`` is read at
import. Reports wall time per call for batched simulator steps, the
mass-matrix kernel and GAE, plus the numba speedup.

    python3 benchmarks/bench_kernels.py [--envs 1,64,256] [--repeat 5]
"""
import argparse
import json
import os
import subprocess
import sys
import textwrap

WORKER = textwrap.dedent("""
    import json, sys, time
    import numpy as np
    from softa import backend
    from softa.config import ModelConfig
    from softa.dynamics import build_model, standing_height
    from softa._layout import NQ, NJ

    envs, repeat = json.loads(sys.argv[1]), int(sys.argv[2])
    model = build_model(ModelConfig())
    pose = np.array([0.35, -0.7, 0.35, -0.7, -1.2, 1.2])
    rng = np.random.default_rng(0)

    def best(fn, calls):
        fn()  # warm-up (and JIT compile)
        times = []
        for _ in range(repeat):
            t0 = time.perf_counter()
            for _ in range(calls):
                fn()
            times.append((time.perf_counter() - t0) / calls)
        return min(times)

    out = {"backend": backend.NAME, "rows": []}
    for n in envs:
        params = np.ascontiguousarray(np.tile(model.params, (n, 1)))
        q = np.zeros((n, NQ)); q[:, 1] = standing_height(model, pose); q[:, 3:] = pose
        q[:, 3:] += rng.normal(0, 0.05, (n, NJ))
        qd = np.zeros((n, NQ))
        target = np.tile(pose, (n, 1))
        zf, zo = np.zeros((n, 2)), np.zeros((n, 2))
        contact, ee, div = np.zeros((n, 2, 3)), np.zeros((n, 6)), np.zeros(n, dtype=np.bool_)
        q0, qd0 = q.copy(), qd.copy()

        def sim():
            q[:] = q0; qd[:] = qd0
            backend.step_batch(params, q, qd, target, zf, zo, contact, ee, div)

        M, h = np.zeros((n, NQ, NQ)), np.zeros((n, NQ))
        T = 192
        rew, val = rng.normal(size=(T, n)), rng.normal(size=(T, n))
        dones = (rng.random((T, n)) < 0.01).astype(np.float64)
        boot, adv = rng.normal(size=n), np.zeros((T, n))
        calls = max(3, 2000 // n)
        out["rows"].append({
            "envs": n,
            "step_batch": best(sim, calls),
            "mass_bias_batch": best(lambda: backend.mass_bias_batch(params, q0, qd0, M, h), calls),
            "gae": best(lambda: backend.gae(rew, val, dones, boot, 0.99, 0.95, adv), calls),
        })
    print(json.dumps(out))
""")


def run(flag: str, envs, repeat) -> dict:
    env = dict(os.environ, SOFTA_NUMBA=flag, OMP_NUM_THREADS="1", OPENBLAS_NUM_THREADS="1",
               MKL_NUM_THREADS="1", NUMBA_NUM_THREADS="1")
    res = subprocess.run([sys.executable, "-c", WORKER, json.dumps(envs), str(repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(res.stdout.strip().splitlines()[-1])


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--envs", default="1,64,256")
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args(argv)
    envs = [int(x) for x in args.envs.split(",")]
    fast, slow = run("1", envs, args.repeat), run("0", envs, args.repeat)
    if fast["backend"] != "numba":
        print("numba unavailable; both runs used the numpy fallback")
    print(f"{'kernel':<16} {'envs':>5} {'numba (us)':>12} {'numpy (us)':>12} {'speedup':>9}")
    for a, b in zip(fast["rows"], slow["rows"]):
        for k in ("step_batch", "mass_bias_batch", "gae"):
            print(f"{k:<16} {a['envs']:>5} {a[k] * 1e6:12.1f} {b[k] * 1e6:12.1f} {b[k] / a[k]:9.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
