# 랜드마크 높이 비율
"""
바디 생성기와 측정기가 함께 쓰는 랜드마크 상수.

모든 높이는 스켈레톤 관절에서 유도된다. 생성기는 이 높이에 단면 링을 놓고,
측정기는 같은 높이에서 단면을 잘라 보조 측정값을 얻는다.
"""

# 다리 세로 길이(L_v = pelvis.y - ankle.y)에 대한 비율
HIP_DROP = 0.05          # hip joint = pelvis - HIP_DROP * L_v
CROTCH_DROP = 0.09       # 몸통 하단(가랑이)
THIGH_DROP = 0.15        # 허벅지 둘레 높이 = pelvis - THIGH_DROP * L_v
KNEE_RISE = 0.50         # ankle 위
CALF_RISE = 0.35         # ankle 위

# 몸통 길이(T = neck.y - pelvis.y)에 대한 비율
SHOULDER_DROP = 0.06     # shoulder = neck - SHOULDER_DROP * T
CHEST_RISE = 0.80        # chest = pelvis + CHEST_RISE * T

# 키(S)에 대한 비율: 허리 링 위아래의 보조 링 간격
WAIST_SHOULDER_RING = 0.06

# 팔 길이(A = shoulder→wrist)에 대한 비율, shoulder.x 기준
BICEP_RUN = 0.25
ELBOW_RUN = 0.50
FOREARM_RUN = 0.65
HAND_RUN = 1.08
FINGERTIP_RUN = 1.16

# 목 + 머리 높이(D = stature - neck.y)
NECK_FRACTION = 0.25     # 목 길이 = 0.25 D, 머리 = 0.75 D
NECK_LEVEL = 0.35        # 목 둘레 높이 = neck + NECK_LEVEL * (head.y - neck.y)
HEAD_CENTER = NECK_FRACTION + (1.0 - NECK_FRACTION) / 2.0  # head.y = neck + HEAD_CENTER * D

# stature - torso - leg 나머지 중 목+머리가 차지하는 비율 (나머지는 발목 높이 쪽)
HEAD_NECK_SHARE = 0.78

# 몸통 단면: 초타원 지수와 전후/좌우 비율
TORSO_EXPONENT = 2.5
TORSO_ASPECT = 0.72

# 허벅지 반지름 대비 다리 중심 x 오프셋
LEG_SPREAD = 1.1
