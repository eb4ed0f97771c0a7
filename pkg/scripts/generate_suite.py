"""
Generate a seeded suite of instance documents for `cli.py bench`

Usage:
    python scripts/generate_suite.py [count] [out_dir]

Sizes follow the acceptance sweep: 1-5 aisles, 2-4 cross-aisles, 0-12 items,
block lengths and gap widths in [1, 100].
"""

import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))

import json
import time

import numpy as np

from model import dump_instance, generate_instance, instance_digest

count = int(sys.argv[1]) if len(sys.argv) > 1 else 100
out_dir = Path(sys.argv[2]) if len(sys.argv) > 2 else Path(__file__).parent.parent / 'suite'

print("="*80)
print("GENERATING INSTANCE SUITE")
print("="*80)
print(f"\nInstances: {count}")
print(f"Output:    {out_dir}")

out_dir.mkdir(parents=True, exist_ok=True)
manifest = []
start_time = time.time()

for seed in range(count):
    rng = np.random.default_rng(seed)
    params = {
        'aisles': int(rng.integers(1, 6)),
        'cross_aisles': int(rng.integers(2, 5)),
        'items': int(rng.integers(0, 13)),
    }
    instance = generate_instance(params, seed)
    path = out_dir / f"inst_{seed:04d}.json"
    path.write_text(dump_instance(instance), encoding='utf-8')
    manifest.append({'file': path.name, 'seed': seed, 'digest': instance_digest(instance), **params})

with open(out_dir / 'manifest.txt', 'w', encoding='utf-8') as f:
    for entry in manifest:
        f.write(json.dumps(entry) + '\n')

print(f"\n[OK] {count} instances written in {time.time() - start_time:.1f}s")
print("\nBenchmark with:")
print(f"  python src/cli.py bench --suite {out_dir} --repeats 3")
print("\n" + "="*80)
