"""Output schemas shared by the measures, oracle and command line."""
