from handball_sim.cli import main

main()
