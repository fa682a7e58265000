# Módulo processors - otimização sobre a classe W e tabelas das figuras
