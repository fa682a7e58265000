"""Exceções do randcorr.

Erros de entrada também herdam de ``ValueError`` para que quem chama possa
capturá-los de forma genérica.
"""


class RandCorrError(Exception):
    """Raiz de todas as exceções do pacote."""


# --- qcore ---
class DimensionOverflow(RandCorrError, ValueError):
    """Operador denso acima de N_MAX qubits."""


class InvalidState(RandCorrError, ValueError):
    """Matriz que não é um estado (traço, hermiticidade ou positividade)."""


class InvalidIndex(RandCorrError, ValueError):
    """Índice de qubit fora do intervalo ou repetido."""


class NonPhysicalParams(RandCorrError, ValueError):
    """Parâmetros Bell-diagonais com autovalor negativo."""


class InvalidParams(RandCorrError, ValueError):
    """Parâmetros de estado fora do domínio declarado."""


class UnnormalizedParams(InvalidParams):
    """Parâmetros de forma padrão com soma dos quadrados diferente de 1."""


# --- designs ---
class DesignParseError(RandCorrError, ValueError):
    """Arquivo de design ilegível ou mal formado."""


class VerificationFailure(RandCorrError):
    """Design não passa na verificação da força declarada."""


class ClosureSizeMismatch(RandCorrError):
    """Fechamento de grupo com ordem diferente da esperada."""


class NonUnitaryResult(RandCorrError):
    """Conjugação por sqrt(P) não produziu matriz unitária."""


class DedupSizeMismatch(RandCorrError):
    """Remoção de fases globais com contagem diferente da esperada."""


# --- moments ---
class InsufficientStrength(RandCorrError, ValueError):
    """Design com força menor que a ordem do momento."""


class DesignSumTooLarge(RandCorrError, ValueError):
    """Soma sobre o design acima do limite de termos; use Monte Carlo."""


class ExpansionTooLarge(RandCorrError, ValueError):
    """Expansão multinomial não cabe no limite de memória."""


# --- criteria / witness-opt ---
class DomainError(RandCorrError, ValueError):
    """R2 fora do domínio da função de fronteira."""


class UnsupportedQubitNumber(RandCorrError, ValueError):
    """Número de qubits fora do intervalo suportado pelo critério."""


class SlopeSignViolation(RandCorrError):
    """Inclinação m >= 0: o critério linear deixa de ser válido."""


class NotDetected(RandCorrError):
    """O estado não é detectado nem no extremo mais favorável."""


# --- cli ---
class StateSpecError(RandCorrError, ValueError):
    """Especificação de estado inválida na linha de comando."""
