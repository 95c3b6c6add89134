from gausspoly.cli import main

main()
