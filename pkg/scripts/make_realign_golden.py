"""Write tests/golden/realign_9x9.json from the block/vec definition.

Pure-Python integer arithmetic, deliberately not sharing code with the
library: rho[r][c] = 9*r + c, viewed as a 3x3 grid of 3x3 blocks. Rows of
the result are vec(rho_{1,1}), ..., vec(rho_{3,1}), vec(rho_{1,2}), ...,
vec(rho_{3,3}); vec stacks the columns of a block.
"""

import json
import pathlib

M = N = 3
rho = [[9 * r + c for c in range(M * N)] for r in range(M * N)]


def block(i, j):
    return [[rho[i * N + k][j * N + l] for l in range(N)] for k in range(N)]


def vec(a):
    rows, cols = len(a), len(a[0])
    return [a[k][l] for l in range(cols) for k in range(rows)]


realigned = [vec(block(i, j)) for j in range(M) for i in range(M)]

out = pathlib.Path(__file__).resolve().parent.parent / "tests" / "golden" / "realign_9x9.json"
out.write_text(json.dumps({"input": "rho[r][c] = 9*r + c", "block_size": N, "realigned": realigned}, indent=1) + "\n")
print(out)
