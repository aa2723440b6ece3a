# symbol names used when words are printed or parsed as strings
SYMBOL_NAMES = "0123456789abcdefghijklmnopqrstuvwxyz"
