# Circuit IR package