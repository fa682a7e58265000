# Módulo core - estados, designs, momentos, critérios e CLI
