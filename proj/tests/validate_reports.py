"""Runs the CLI on a spread of inputs and validates every JSON report against the schema."""
import json
import subprocess
import sys

import jsonschema

cli, schema_path, data = sys.argv[1], sys.argv[2], sys.argv[3]
with open(schema_path) as f:
    schema = json.load(f)
jsonschema.Draft202012Validator.check_schema(schema)
validator = jsonschema.Draft202012Validator(schema)

runs = [
    ["classify", "--named", "K3"],
    ["classify", "--named", "P4", "--timing"],
    ["classify", "--graph", f"{data}/k3.graph", "--samples", "16"],
    ["integrals", "--named", "S3"],
    ["integrals", "--named", "G2"],
    ["integrals", "--named", "K4", "--families", "energy,center,butler"],
    ["geodesic", "--named", "S2", "--y0", "1,0,0,1,1"],
    ["geodesic", "--named", "K3", "--y0", "1,0,0,1,1,1", "--method", "rk4", "--t", "1", "--step", "0.01"],
    ["quotient-check", "--k", "2", "--m", "1,2"],
    ["quotient-check", "--k", "3", "--r", "2", "--m", "1,2,3", "--rvec", "1,2,3", "--timing"],
]
bad = 0
for args in runs:
    proc = subprocess.run([cli, *args, "--json", "-"], capture_output=True, text=True)
    if proc.returncode not in (0, 1):
        print(f"{' '.join(args)}: exit {proc.returncode}\n{proc.stderr}")
        bad += 1
        continue
    report = json.loads(proc.stdout)
    errors = list(validator.iter_errors(report))
    for e in errors:
        print(f"{' '.join(args)}: {'/'.join(map(str, e.absolute_path))}: {e.message}")
    bad += len(errors)
    if report["command"] != args[0]:
        print(f"{' '.join(args)}: command field is {report['command']}")
        bad += 1
print(f"{len(runs)} reports checked, {bad} problems")
sys.exit(1 if bad else 0)
