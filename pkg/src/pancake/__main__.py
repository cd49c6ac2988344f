from pancake.cli import main

main()
