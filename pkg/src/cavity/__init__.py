"""Two-mode cavity QED: RWA and full Hamiltonians, Rabi dynamics and transmission spectroscopy."""
