"""
Certificates and their verifier
===============================

Solve an instance, write its certificate, then show that the independent
checker accepts it and rejects a forged copy.
"""

# %%
import copy
import json

from smallzeros import LinearForm, QuadraticForm, run_solve, verify_certificate
from smallzeros.documents import make_instance

inst = make_instance(QuadraticForm.diagonal(1, 1, -2), [LinearForm((1, -1, 0)), LinearForm((0, 0, 1))],
                     label="demo")
cert = run_solve(inst)
print(json.dumps({k: cert[k] for k in ("status", "point", "heights", "oracle")}, indent=2))

# %%
print("verifier:", verify_certificate(cert).message)

# %%
# Change the claimed point and the checker notices, whether or not the
# digest is refreshed.
forged = copy.deepcopy(cert)
forged["point"] = ["1", "1", "2"]
print("forged point:", verify_certificate(forged).message)

# %%
# A form with no rational zero yields an unsatisfiable certificate, which
# the checker re-derives on its own.
sphere = run_solve(make_instance(QuadraticForm.diagonal(1, 1, 1), [LinearForm((1, 0, 0))]))
print(sphere["status"], sphere["reason"]["kind"], verify_certificate(sphere).ok)
