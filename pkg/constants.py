# constants.py
"""
Problem-class tables and reference verification values
Centralized location for all static benchmark data (classes S, W, A, B, C)
"""

SUPPORTED_CLASSES = ('S', 'W', 'A', 'B', 'C')
BENCHMARKS = ('ep', 'cg', 'ft', 'is', 'mg', 'bt', 'sp', 'lu')

# Linear congruential generator (modulus 2^46)
LCG_MULTIPLIER = 1220703125.0  # 5^13
DEFAULT_SEED = 271828183.0
DEFAULT_EPSILON = 1.0e-8

MIB = 1024 * 1024

# ---------------------------------------------------------------------------
# EP: 2^(M+1) uniform draws in chunks of 2^16 pairs
# ---------------------------------------------------------------------------
EP_CHUNK_LOG2 = 16
EP_SEED = 271828183.0
EP_ANNULI = 10
EP_CLASSES = {
    'S': {'m': 24, 'sx': -3.247834652034740e+3, 'sy': -6.958407078382297e+3,
          'q': (6140517, 5865300, 1100361, 68546, 1648, 17, 0, 0, 0, 0)},
    'W': {'m': 25, 'sx': -2.863319731645753e+3, 'sy': -6.320053679109499e+3,
          'q': (12281576, 11729692, 2202726, 137368, 3371, 36, 0, 0, 0, 0)},
    'A': {'m': 28, 'sx': -4.295875165629892e+3, 'sy': -1.580732573678431e+4,
          'q': (98257395, 93827014, 17611549, 1110028, 26536, 245, 0, 0, 0, 0)},
    'B': {'m': 30, 'sx': 4.033815542441498e+4, 'sy': -2.660669192809235e+4,
          'q': (393058470, 375280898, 70460742, 4438852, 105691, 948, 5, 0, 0, 0)},
    'C': {'m': 32, 'sx': 4.764367927995374e+4, 'sy': -8.084072988043731e+4,
          'q': None},
}

# ---------------------------------------------------------------------------
# CG
# ---------------------------------------------------------------------------
CG_SEED = 314159265.0
CG_RCOND = 0.1
CG_INNER_ITERATIONS = 25
CG_EPSILON = 1.0e-10
CG_CLASSES = {
    'S': {'na': 1400, 'nonzer': 7, 'niter': 15, 'shift': 10.0, 'zeta': 8.5971775078648},
    'W': {'na': 7000, 'nonzer': 8, 'niter': 15, 'shift': 12.0, 'zeta': 10.362595087124},
    'A': {'na': 14000, 'nonzer': 11, 'niter': 15, 'shift': 20.0, 'zeta': 17.130235054029},
    'B': {'na': 75000, 'nonzer': 13, 'niter': 75, 'shift': 60.0, 'zeta': 22.712745482631},
    'C': {'na': 150000, 'nonzer': 15, 'niter': 75, 'shift': 110.0, 'zeta': 28.973605592845},
}

# ---------------------------------------------------------------------------
# FT
# ---------------------------------------------------------------------------
FT_SEED = 314159265.0
FT_ALPHA = 1.0e-6
FT_EPSILON = 1.0e-12
FT_CHECKSUM_POINTS = 1024
FT_CLASSES = {
    'S': {'dims': (64, 64, 64), 'niter': 6, 'checksums': (
        (5.546087004964e+02, 4.845363331978e+02),
        (5.546385409189e+02, 4.865304269511e+02),
        (5.546148406171e+02, 4.883910722336e+02),
        (5.545423607415e+02, 4.901273169046e+02),
        (5.544255039624e+02, 4.917475857993e+02),
        (5.542683411902e+02, 4.932597244941e+02),
    )},
    'W': {'dims': (128, 128, 32), 'niter': 6, 'checksums': (
        (5.673612178944e+02, 5.293246849175e+02),
        (5.631436885271e+02, 5.282149986629e+02),
        (5.594024089970e+02, 5.270996558037e+02),
        (5.560698047020e+02, 5.260027904925e+02),
        (5.530898991250e+02, 5.249400845633e+02),
        (5.504159734538e+02, 5.239212247086e+02),
    )},
    'A': {'dims': (256, 256, 128), 'niter': 6, 'checksums': (
        (5.046735008193e+02, 5.114047905510e+02),
        (5.059412319734e+02, 5.098809666433e+02),
        (5.069376896287e+02, 5.098144042213e+02),
        (5.077892868474e+02, 5.101336130759e+02),
        (5.085233095391e+02, 5.104914655194e+02),
        (5.091487099959e+02, 5.107917842803e+02),
    )},
    'B': {'dims': (512, 256, 256), 'niter': 20, 'checksums': (
        (5.177643571579e+02, 5.077803458597e+02),
        (5.154521291263e+02, 5.088249431599e+02),
        (5.146409228649e+02, 5.096208912659e+02),
        (5.142378756213e+02, 5.101023387619e+02),
        (5.139626667737e+02, 5.103976610617e+02),
        (5.137423460082e+02, 5.105948019802e+02),
        (5.135547056878e+02, 5.107404165783e+02),
        (5.133910925466e+02, 5.108576573661e+02),
        (5.132470705390e+02, 5.109577278523e+02),
        (5.131197729984e+02, 5.110460304483e+02),
        (5.130070319283e+02, 5.111252433800e+02),
        (5.129070537032e+02, 5.111968077718e+02),
        (5.128182883502e+02, 5.112616233064e+02),
        (5.127393733383e+02, 5.113203605551e+02),
        (5.126691062020e+02, 5.113735928093e+02),
        (5.126064276004e+02, 5.114218460548e+02),
        (5.125504076570e+02, 5.114656139760e+02),
        (5.125002331720e+02, 5.115053595966e+02),
        (5.124551951846e+02, 5.115415130407e+02),
        (5.124146770029e+02, 5.115744692211e+02),
    )},
    'C': {'dims': (512, 512, 512), 'niter': 20, 'checksums': (
        (5.195078707457e+02, 5.149019699238e+02),
        (5.155422171134e+02, 5.127578201997e+02),
        (5.144678022222e+02, 5.122251847514e+02),
        (5.140150594328e+02, 5.121090289018e+02),
        (5.137550426810e+02, 5.121143685824e+02),
        (5.135811056728e+02, 5.121496764568e+02),
        (5.134569343165e+02, 5.121870921893e+02),
        (5.133651975661e+02, 5.122193250322e+02),
        (5.132955192805e+02, 5.122454735794e+02),
        (5.132410471738e+02, 5.122663649603e+02),
        (5.131971141679e+02, 5.122830879827e+02),
        (5.131605205716e+02, 5.122965869718e+02),
        (5.131290734194e+02, 5.123075927445e+02),
        (5.131012720314e+02, 5.123166486553e+02),
        (5.130760908195e+02, 5.123241541685e+02),
        (5.130528295923e+02, 5.123304037599e+02),
        (5.130310107773e+02, 5.123356167976e+02),
        (5.130103090133e+02, 5.123399592211e+02),
        (5.129905029333e+02, 5.123435588985e+02),
        (5.129714421109e+02, 5.123465164008e+02),
    )},
}

# ---------------------------------------------------------------------------
# IS
# ---------------------------------------------------------------------------
IS_SEED = 314159265.0
IS_ITERATIONS = 10
IS_TEST_ARRAY_SIZE = 5
IS_CLASSES = {
    'S': {'total_keys_log2': 16, 'max_key_log2': 11, 'buckets_log2': 9,
          'test_index': (48427, 17148, 23627, 62548, 4431),
          'test_rank': (0, 18, 346, 64917, 65463)},
    'W': {'total_keys_log2': 20, 'max_key_log2': 16, 'buckets_log2': 10,
          'test_index': (357773, 934767, 875723, 898999, 404505),
          'test_rank': (1249, 11698, 1039987, 1043896, 1048018)},
    'A': {'total_keys_log2': 23, 'max_key_log2': 19, 'buckets_log2': 10,
          'test_index': (2112377, 662041, 5336171, 3642833, 4250760),
          'test_rank': (104, 17523, 123928, 8288932, 8388264)},
    'B': {'total_keys_log2': 25, 'max_key_log2': 21, 'buckets_log2': 10,
          'test_index': (41869, 812306, 5102857, 18232239, 26860214),
          'test_rank': (33422937, 10244, 59149, 33135281, 99)},
    'C': {'total_keys_log2': 27, 'max_key_log2': 23, 'buckets_log2': 10,
          'test_index': (44172927, 72999161, 74326391, 129606274, 21736814),
          'test_rank': (61147, 882988, 266290, 133997595, 133525895)},
}

# ---------------------------------------------------------------------------
# MG
# ---------------------------------------------------------------------------
MG_SEED = 314159265.0
MG_EXTREMES = 10
MG_A_COEFFS = (-8.0 / 3.0, 0.0, 1.0 / 6.0, 1.0 / 12.0)
MG_C_COEFFS_SMALL = (-3.0 / 8.0, 1.0 / 32.0, -1.0 / 64.0, 0.0)
MG_C_COEFFS_LARGE = (-3.0 / 17.0, 1.0 / 33.0, -1.0 / 61.0, 0.0)
MG_CLASSES = {
    'S': {'n': 32, 'niter': 4, 'rnm2': 0.5307707005734e-04, 'c': MG_C_COEFFS_SMALL},
    'W': {'n': 128, 'niter': 4, 'rnm2': 0.6467329375339e-05, 'c': MG_C_COEFFS_SMALL},
    'A': {'n': 256, 'niter': 4, 'rnm2': 0.2433365309069e-05, 'c': MG_C_COEFFS_SMALL},
    'B': {'n': 256, 'niter': 20, 'rnm2': 0.1800564401355e-05, 'c': MG_C_COEFFS_LARGE},
    'C': {'n': 512, 'niter': 20, 'rnm2': 0.5706732285740e-06, 'c': MG_C_COEFFS_LARGE},
}

# ---------------------------------------------------------------------------
# CFD pseudo-applications (BT, SP, LU): exact-solution polynomial coefficients
# ---------------------------------------------------------------------------
CFD_EXACT_COEFFS = (
    (2.0, 0.0, 0.0, 4.0, 5.0, 3.0, 0.5, 0.02, 0.01, 0.03, 0.5, 0.4, 0.3),
    (1.0, 0.0, 0.0, 0.0, 1.0, 2.0, 3.0, 0.01, 0.03, 0.02, 0.4, 0.3, 0.5),
    (2.0, 2.0, 0.0, 0.0, 0.0, 2.0, 3.0, 0.04, 0.03, 0.05, 0.3, 0.5, 0.4),
    (2.0, 2.0, 0.0, 0.0, 0.0, 2.0, 3.0, 0.03, 0.05, 0.04, 0.2, 0.1, 0.3),
    (5.0, 4.0, 3.0, 2.0, 0.1, 0.4, 0.3, 0.05, 0.04, 0.03, 0.1, 0.3, 0.2),
)
# c1..c5 of the flux and viscous terms
CFD_GAS_CONSTANTS = (1.4, 0.4, 0.1, 1.0, 1.4)
# second-difference diffusion coefficient per axis (x, y, z), same for all five components
CFD_DIFFUSION = (0.75, 0.75, 1.0)
CFD_STEP_LOG_INTERVAL = 20

BT_CLASSES = {
    'S': {'n': 12, 'niter': 60, 'dt': 0.010,
          'xcr': (1.7034283709541311e-01, 1.2975252070034097e-02, 3.2527926989486055e-02,
                  2.6436421275166801e-02, 1.9211784131744430e-01),
          'xce': (4.9976913345811579e-04, 4.5195666782961927e-05, 7.3973765172921357e-05,
                  7.3821238632439731e-05, 8.9269630987491446e-04)},
    'W': {'n': 24, 'niter': 200, 'dt': 0.0008,
          'xcr': (0.1125590409344e+03, 0.1180007595731e+02, 0.2710329767846e+02,
                  0.2469174937669e+02, 0.2638427874317e+03),
          'xce': (0.4419655736008e+01, 0.4638531260002e+00, 0.1011551749967e+01,
                  0.9235878729944e+00, 0.1018045837718e+02)},
    'A': {'n': 64, 'niter': 200, 'dt': 0.0008,
          'xcr': (1.0806346714637264e+02, 1.1319730901220813e+01, 2.5974354511582465e+01,
                  2.3665622544678910e+01, 2.5278963211748344e+02),
          'xce': (4.2348416040525025e+00, 4.4390282496995698e-01, 9.6692480136345650e-01,
                  8.8302063039765474e-01, 9.7379901770829278e+00)},
    'B': {'n': 102, 'niter': 200, 'dt': 0.0003,
          'xcr': (1.4233597229287254e+03, 9.9330522590150238e+01, 3.5646025644535285e+02,
                  3.2485447959084092e+02, 3.2707541254659363e+03),
          'xce': (5.2969847140936856e+01, 4.4632896115670668e+00, 1.3122573342210174e+01,
                  1.2006925323559144e+01, 1.2459576151035986e+02)},
    'C': {'n': 162, 'niter': 200, 'dt': 0.0001,
          'xcr': (0.62398116551764615e+04, 0.50793239190423964e+03, 0.15423530093013596e+04,
                  0.13302387929291190e+04, 0.11604087428436455e+05),
          'xce': (0.16462008369091265e+03, 0.11497107903824313e+02, 0.41207446207461508e+02,
                  0.37087651059694167e+02, 0.36211053051841265e+03)},
}

SP_CLASSES = {
    'S': {'n': 12, 'niter': 100, 'dt': 0.015, 'stack_reserve': 4 * MIB,
          'xcr': (2.7470315451339479e-02, 1.0360746705285417e-02, 1.6235745065095532e-02,
                  1.5840557224455615e-02, 3.4849040609362460e-02),
          'xce': (2.7289258557377227e-05, 1.0364446640837285e-05, 1.6154798287166471e-05,
                  1.5750704994480102e-05, 3.4177666183390531e-05)},
    'W': {'n': 36, 'niter': 400, 'dt': 0.0015, 'stack_reserve': 4 * MIB,
          'xcr': (0.1893253733584e-02, 0.1717075447775e-03, 0.2778153350936e-03,
                  0.2887475409984e-03, 0.3143611161242e-02),
          'xce': (0.7542088599534e-04, 0.6512852253086e-05, 0.1049092285688e-04,
                  0.1128838671535e-04, 0.1212845639773e-03)},
    'A': {'n': 64, 'niter': 400, 'dt': 0.0015, 'stack_reserve': 4 * MIB,
          'xcr': (2.4799822399300195e+00, 1.1276337964368832e+00, 1.5028977888770491e+00,
                  1.4217816211695179e+00, 2.1292113035138280e+00),
          'xce': (1.0900140297820550e-04, 3.7343951769282091e-05, 5.0092785406541633e-05,
                  4.7671093939528255e-05, 1.3621613399213001e-04)},
    'B': {'n': 102, 'niter': 400, 'dt': 0.001, 'stack_reserve': 32 * MIB,
          'xcr': (0.6903293579998e+02, 0.3095134488084e+02, 0.4103336647017e+02,
                  0.3864769009604e+02, 0.5643482272596e+02),
          'xce': (0.9810006190188e-02, 0.1022827905670e-02, 0.1720597911692e-02,
                  0.1694479428231e-02, 0.1847456263981e-01)},
    'C': {'n': 162, 'niter': 400, 'dt': 0.00067, 'stack_reserve': 32 * MIB,
          'xcr': (0.5881691581829e+03, 0.2454417603569e+03, 0.3293829191851e+03,
                  0.3081924971891e+03, 0.4597223799176e+03),
          'xce': (0.2598120500183e+00, 0.2590888922315e-01, 0.5132886416320e-01,
                  0.4806073419454e-01, 0.5483377491301e+00)},
}

LU_OMEGA = 1.2
# SSOR stops early once every residual norm drops below this
LU_TOLERANCE = 1.0e-8
LU_CLASSES = {
    'S': {'n': 12, 'niter': 50, 'dt': 0.5,
          'xcr': (1.6196343210976702e-02, 2.1976745164821318e-03, 1.5179927653399185e-03,
                  1.5029584435994323e-03, 3.4264073155896461e-02),
          'xce': (6.4223319957960924e-04, 8.4144342047347926e-05, 5.8588269616485186e-05,
                  5.8474222595157350e-05, 1.3103347914111294e-03),
          'xci': 7.8418928865937083e+00},
    'W': {'n': 33, 'niter': 300, 'dt': 1.5e-3,
          'xcr': (0.1236511638192e+02, 0.1317228477799e+01, 0.2550120713095e+01,
                  0.2326187750252e+01, 0.2826799444189e+02),
          'xce': (0.4867877144216e+00, 0.5064652880982e-01, 0.9281818101960e-01,
                  0.8570126542733e-01, 0.1084277417792e+01),
          'xci': 0.1161399311023e+02},
    'A': {'n': 64, 'niter': 250, 'dt': 2.0,
          'xcr': (7.7902107606689367e+02, 6.3402765259692870e+01, 1.9499249727292479e+02,
                  1.7845301160418537e+02, 1.8384760349464247e+03),
          'xce': (2.9964085685471943e+01, 2.8194576365003349e+00, 7.3473412698774742e+00,
                  6.7139225687777051e+00, 7.0715315688392578e+01),
          'xci': 2.6030925604886277e+01},
    'B': {'n': 102, 'niter': 250, 'dt': 2.0,
          'xcr': (3.5532672969982736e+03, 2.6214750795310692e+02, 8.8333721850952190e+02,
                  7.7812774739425265e+02, 7.3087969592545314e+03),
          'xce': (1.1401176380212709e+02, 8.1098963655421574e+00, 2.8480597317698308e+01,
                  2.5905394567832939e+01, 2.6054907504857413e+02),
          'xci': 4.7887162703308227e+01},
    'C': {'n': 162, 'niter': 250, 'dt': 2.0,
          'xcr': (1.03766980323537846e+04, 8.92212458801008552e+02, 2.56238814582660871e+03,
                  2.19194343857831427e+03, 1.78078057261061185e+04),
          'xce': (2.15986399716949279e+02, 1.55789559239863600e+01, 5.41318863077207766e+01,
                  4.82262643154045421e+01, 4.55902910043250358e+02),
          'xci': 6.66404553572181300e+01},
}

# ---------------------------------------------------------------------------
# Harness
# ---------------------------------------------------------------------------
CSV_COLUMNS = ('benchmark', 'class', 'workers', 'rep', 'seconds', 'mflops', 'verified', 'safe_mode')
OUTPUT_FORMATS = ('csv', 'json', 'text')
DEFAULT_COMPARE_KEY = ('benchmark', 'class', 'workers')
SHAPIRO_MIN_N = 3
SHAPIRO_MAX_N = 50
WILCOXON_MIN_N = 6
WILCOXON_EXACT_MAX_N = 25
TTEST_MIN_N = 3
