from heegaard.cli import main

main()
