'''alphabets, encodings, guards and file formats shared across the package.
'''

# reduction alphabet
B = 'b'
E = 'e'
C = 'c'
D = 'd'
REDUCTION_ALPHABET = (B, E, C, D)

# binary encoding of the reduction alphabet, synchronizing on 0110 <-> "eb"
ENCODING = {
    C: '0000',
    D: '1111',
    B: '10',
    E: '01',
}
BINARY_ALPHABET = ('0', '1')
SYNC_WORD = '0110'
FORBIDDEN_WORD = '1001'

# guards against runaway enumeration
MAX_ORACLE_N = 24
MAX_REDUCTION_N = 20
MAX_BENCH_N = 16
MAX_CAMPAIGN_N = 10
MAX_LEMMA_N = 6
BRUTEFORCE_MAX_M = 16
BRUTEFORCE_MAX_NODES = 64

# truth-table rows evaluated per numpy batch in the SAT oracle
ORACLE_CHUNK = 1 << 16

# graph file
GRAPH_MAGIC = 'pmlg'
GRAPH_VERSION = '1'
DIRECTED = 'directed'
UNDIRECTED = 'undirected'
COMMENT = '#'

# variants of the reduction pipeline
VARIANT_BASE = 'Base'
VARIANT_DEGREE3 = 'Degree3'
VARIANT_BINARY = 'Binary'
VARIANT_BINARY_DAG = 'BinaryDag'
VARIANT_DEGREE3_DAG = 'Degree3Dag'

# cli / campaign names for the variants that get matched
CAMPAIGN_VARIANTS = {
    'base': VARIANT_BASE,
    'degree3': VARIANT_DEGREE3,
    'binary': VARIANT_BINARY,
    'dag': VARIANT_BINARY_DAG,
}

# random clause model
CLAUSE_WIDTH = (1, 3)
MAX_REDRAWS = 200

# formulas per (n, k) in the lemma suite
LEMMA_TRIALS = 100

CAMPAIGN_COLUMNS = [
    'trial', 'n', 'k', 'sat',
    'match_base', 'match_deg3', 'match_bin', 'match_dag',
    'm', 'edges', 'micros_match',
]
VARIANT_COLUMNS = {
    VARIANT_BASE: 'match_base',
    VARIANT_DEGREE3: 'match_deg3',
    VARIANT_BINARY: 'match_bin',
    VARIANT_BINARY_DAG: 'match_dag',
}
BENCH_COLUMNS = ['n', 'k', 'm', 'edges', 'sat', 'micros', 'repeats']
RATIO_COLUMNS = ['sat', 'n', 'm_ratio', 'm_expected', 'edges_ratio', 'time_ratio', 'in_band']
# match time per n -> n + 2 step, quadratic in m and |E|
TIME_RATIO_BAND = (2.5, 6.0)
TIME_BAND_MIN_N = 10

REPORT_NAME = 'report.txt'
TRIALS_NAME = 'trials.csv'
LEMMAS_NAME = 'lemmas.txt'

# exit codes
EXIT_MATCH = 0
EXIT_NO_MATCH = 1
EXIT_ERROR = 2
