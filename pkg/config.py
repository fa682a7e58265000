"""
Configurações centralizadas do randcorr (momentos de correlações aleatórias)
"""

import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()  # Carrega variáveis do arquivo .env se existir

# Diretórios do projeto
PROJECT_ROOT = Path(__file__).parent
SRC_DIR = PROJECT_ROOT / "src"
CORE_DIR = SRC_DIR / "core"
UTILS_DIR = SRC_DIR / "utils"
PROCESSORS_DIR = SRC_DIR / "processors"
SCRIPTS_DIR = PROJECT_ROOT / "scripts"
DOCS_DIR = PROJECT_ROOT / "docs"
DATA_DIR = Path(os.getenv("RANDCORR_DATA_DIR", str(PROJECT_ROOT / "data")))
LINE_PARAMS_FILE = DATA_DIR / "line_params.json"

# Configurações da aplicação
APP_NAME = "randcorr"
APP_DESCRIPTION = "Momentos de correlações aleatórias e critérios de emaranhamento"
APP_VERSION = "1.0.0"

# Paralelismo (RANDCORR_THREADS; a flag --threads tem prioridade)
DEFAULT_THREADS = max(1, int(os.getenv("RANDCORR_THREADS", "1")))

# Operadores densos
N_MAX = int(os.getenv("RANDCORR_NMAX", "12"))

# Tolerâncias
STATE_TOL = 1e-12      # traço / hermiticidade
PSD_TOL = 1e-10        # menor autovalor admitido: -PSD_TOL
DECISION_TOL = 1e-10   # desigualdades dos critérios
GROUP_TOL = 1e-8       # igualdade de elementos de grupo / direções
DESIGN_TOL = 1e-10     # verificação de designs esféricos
UNITARY_DESIGN_TOL = 1e-9
UNITARY_DESIGN_TRIALS = 20

# Custos máximos dos motores de momentos
DESIGN_SUM_MAX_TERMS = 10**9
DESIGN_CHUNK_TERMS = 2**22
MONOMIAL_MAX_TERMS = 6_000_000
MC_CHUNK_SIZE = 2**14
MC_MIN_SAMPLES = 100

# Otimização sobre a classe W
OPT_RESTARTS = 64
OPT_SPREAD_WARN = 1e-5
OPT_MAXITER_PER_DIM = 400
OPT_XATOL = 1e-10
OPT_FATOL = 1e-14

# Limiares (bisseção)
BISECTION_TOL = 1e-10

# Varredura BD
SCAN_BD_BAND = 1e-8    # faixa em torno de |c|_1 = 1 fora da comparação com a regra exata
BD_RANK_TOL = 1e-6     # menor autovalor de um estado BD de posto incompleto

# Saída
CSV_FLOAT_FORMAT = "%.17g"

# Configurações de logging
LOG_LEVEL = os.getenv("RANDCORR_LOG_LEVEL", "INFO")
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
