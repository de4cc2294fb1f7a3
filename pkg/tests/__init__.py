# spanfact test suite
