"""
Liouville-type tuples and their certificates
============================================

``q_0 = 1``, ``q_{k+1} = 3^(q_k^4)`` grows far beyond anything that fits
in memory, so distances are certified in log space.
"""

import json

from quasielliptic import liouville as lv

# %%
for k in range(4):
    print(f"q_{k} = 3^{lv.qk_sequence(k).exponent if k < 3 else '(3^324)'}")

# %%
tup = lv.build_tuple(2, "+-++-+", 3)
for k in (1, 2):
    for i in (1, 2):
        d = lv.nearest_int_distance(tup, k, i)
        print(f"k={k} i={i}: log ||q_k x_i|| = {d.log_distance.mid()}  nearest integer is p_k: {d.nearest_is_p}")

# %%
cert = lv.certify(3, lv.random_signs(3, 3, seed=7), 3, kmax=2)
data = cert.to_json()
print("verdict:", data["verdict"])
for rec in data["records"]:
    print("k =", rec["k"], [q["verdict"] for q in rec["inequalities"]])

# %%
# Recomputing from the JSON catches a forged numerator.
ok, _ = lv.check_certificate(json.loads(json.dumps(data)))
data["records"][0]["p_k"][0] = "12345"
print("original ok:", ok, " forged ok:", lv.check_certificate(data)[0])
