"""
Checking the axioms on random models
====================================

Every schema instance should hold everywhere. A corrupted schema is
included to show that the harness can fail.
"""

from simpla.syntax import parse
from simpla.validity import GenParams, instantiate, sat_bounded, soundness_suite

for name in ("EPI", "KNI", "ENI"):
    print(name, "->", instantiate(name, seed=0))

report = soundness_suite(["EPI", "KNI", "ENI", "T^K", "ENI-unguarded"], trials=40,
                         gp=GenParams(seed=3), n_models=20)
print(report.to_text())
ce = report.counterexamples[0]
print("first mutant counterexample:", ce.formula, "at", ce.point)

# bounded satisfiability: a witness, or a verdict that no small model works
print(sat_bounded(parse("(<x:=a> top & <y:=b> Khat{y} [z:=a] bot)")))
print(sat_bounded(parse("(<x:=a> top & [x:=a] bot)"), 3))
