# Módulo utils - erros, logging, sementes, E/S e gramática de estados
