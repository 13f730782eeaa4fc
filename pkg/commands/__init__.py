# Command package initialization
