# Módulo principal do randcorr: momentos de correlações aleatórias em qubits
__version__ = "1.0.0"
__author__ = "Collos Ltda"
