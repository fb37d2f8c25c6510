"""Full bipartite and tripartite checks, with the verdicts they report."""

from lutrace import CheckOptions, check, random_density, random_lu_pair

rho, rho_hat, _ = random_lu_pair((2, 2), seed=7)
print("bipartite LU pair:", check(rho, rho_hat).summary)
print("bipartite unrelated:", check(rho, random_density((2, 2), 8)).summary)

rho, rho_hat, _ = random_lu_pair((2, 2, 2), seed=9)
report = check(rho, rho_hat, CheckOptions(max_word_len=4))
print("tripartite LU pair:", report.summary)
for c in report.criteria:
    print(f"  {c.name:28s} {c.verdict.value}{' (informational)' if c.informational else ''}")

other = check(rho, random_density((2, 2, 2), 10))
failing = [c.name for c in other.criteria if c.verdict.value == "fail" and not c.informational]
print("tripartite unrelated:", other.summary, "failing:", failing[:4])
