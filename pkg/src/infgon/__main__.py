from infgon.cli import main

main()
