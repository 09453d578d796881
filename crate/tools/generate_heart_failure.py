"""Generate the synthetic heart-failure stand-in shipped in crates/varsel/data.

The public clinical dataset (299 patients, 12 clinical variables, DEATH_EVENT
target, 96 deaths) is not redistributed here. This script produces a file with
the same schema, row count, class balance (96 / 203) and sex split (194 men /
105 women), with deaths driven by age, ejection fraction, serum creatinine,
serum sodium and follow-up time. Values are synthetic.

    python3 tools/generate_heart_failure.py > crates/varsel/data/heart_failure.csv
"""
import sys

import numpy as np

N = 299
DEATHS = 96
MEN = 194

rng = np.random.default_rng(20200203)

age = np.clip(np.round(rng.normal(60.8, 11.9, N)), 40, 95).astype(int)
anaemia = (rng.random(N) < 0.43).astype(int)
cpk = np.clip(np.round(np.exp(rng.normal(5.7, 1.0, N))), 23, 7861).astype(int)
diabetes = (rng.random(N) < 0.42).astype(int)
ef = np.clip(np.round(rng.normal(38.1, 11.8, N)), 14, 80).astype(int)
hbp = (rng.random(N) < 0.35).astype(int)
platelets = np.clip(np.round(rng.normal(263358, 97804, N), -2), 25100, 850000)
creat = np.clip(np.round(np.exp(rng.normal(0.2, 0.4, N)), 2), 0.5, 9.4)
sodium = np.clip(np.round(rng.normal(136.6, 4.4, N)), 113, 148).astype(int)
sex = np.zeros(N, dtype=int)
sex[rng.permutation(N)[:MEN]] = 1
smoking = np.where(sex == 1, rng.random(N) < 0.47, rng.random(N) < 0.04).astype(int)
time = np.clip(np.round(rng.uniform(4, 285, N)), 4, 285).astype(int)

risk = (
    0.05 * (age - 60)
    - 0.07 * (ef - 38)
    + 1.3 * np.log(creat)
    - 0.05 * (sodium - 136)
    - 0.018 * (time - 130)
    + 0.25 * anaemia
    + 0.2 * hbp
    + rng.gumbel(0.0, 0.9, N)
)
death = np.zeros(N, dtype=int)
death[np.argsort(-risk, kind="stable")[:DEATHS]] = 1

w = sys.stdout
w.write(
    "age,anaemia,creatinine_phosphokinase,diabetes,ejection_fraction,"
    "high_blood_pressure,platelets,serum_creatinine,serum_sodium,sex,"
    "smoking,time,DEATH_EVENT\n"
)
for i in range(N):
    w.write(
        f"{age[i]},{anaemia[i]},{cpk[i]},{diabetes[i]},{ef[i]},{hbp[i]},"
        f"{platelets[i]:.0f},{creat[i]:.2f},{sodium[i]},{sex[i]},{smoking[i]},"
        f"{time[i]},{death[i]}\n"
    )
